use std::sync::{Arc, OnceLock};

use fracdec::presets::{hermitian_f64, hermitian_f81};
use fracdec::{CurveModel, Elem, ExtensionTower, Field, FractionalSpec, Monomial, RingElement};
use proptest::prelude::*;

fn f64_spec() -> &'static FractionalSpec {
    static SPEC: OnceLock<FractionalSpec> = OnceLock::new();
    SPEC.get_or_init(hermitian_f64)
}

fn f81_spec() -> &'static FractionalSpec {
    static SPEC: OnceLock<FractionalSpec> = OnceLock::new();
    SPEC.get_or_init(hermitian_f81)
}

fn tower_16_4() -> &'static ExtensionTower {
    static TOWER: OnceLock<ExtensionTower> = OnceLock::new();
    TOWER.get_or_init(|| ExtensionTower::new(Field::gf(2, 2).unwrap(), 2).unwrap())
}

fn hermitian3() -> &'static (Arc<Field>, CurveModel) {
    static CURVE: OnceLock<(Arc<Field>, CurveModel)> = OnceLock::new();
    CURVE.get_or_init(|| {
        let f = Field::gf(3, 2).unwrap();
        (f.clone(), CurveModel::hermitian(f, 3).unwrap())
    })
}

fn message(spec: &'static FractionalSpec) -> impl Strategy<Value = Vec<Elem>> {
    let q = spec.tower().ext().order();
    proptest::collection::vec((0..q).prop_map(Elem), spec.k())
}

/// A function over F_9 on `x^4 = y^3 + y` with pole order at most `bound`.
fn function(bound: i64) -> impl Strategy<Value = RingElement> {
    let (f, curve) = hermitian3();
    let basis = curve.rr_basis(bound);
    proptest::collection::vec((0..9u32).prop_map(Elem), basis.len())
        .prop_map(move |c| RingElement::from_basis(&basis, &c, f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn projection_is_base_linear(a in 0..4u32, b in 0..4u32, x in 0..16u32, y in 0..16u32) {
        let t = tower_16_4();
        let (ext, base) = (t.ext(), t.base());
        let (a, b, x, y) = (Elem(a), Elem(b), Elem(x), Elem(y));
        let lhs = t.project(ext.add(ext.mul(a, x), ext.mul(b, y)));
        let rhs: Vec<Elem> = t.project(x).iter().zip(t.project(y))
            .map(|(&u, v)| base.add(base.mul(a, u), base.mul(b, v)))
            .collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn virtual_projection_is_base_linear(f in message(f64_spec()), h in message(f64_spec()), a in 0..4u32, b in 0..4u32) {
        let spec = f64_spec();
        let (ext, base) = (spec.tower().ext(), spec.tower().base());
        let (a, b) = (Elem(a), Elem(b));
        let combo: Vec<Elem> = f.iter().zip(&h).map(|(&x, &y)| ext.add(ext.mul(a, x), ext.mul(b, y))).collect();
        for t in 0..spec.m() {
            let lhs = spec.apply_t(&combo, t).unwrap();
            let rhs = spec.apply_t(&f, t).unwrap().scale(base, a).add(base, &spec.apply_t(&h, t).unwrap().scale(base, b));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn download_is_base_linear(f in message(f81_spec()), h in message(f81_spec()), a in 0..9u32) {
        let spec = f81_spec();
        let (ext, base) = (spec.tower().ext(), spec.tower().base());
        let a = Elem(a);
        let u = spec.code().encode(&f).unwrap();
        let v = spec.code().encode(&h).unwrap();
        let combo: Vec<Elem> = u.iter().zip(&v).map(|(&x, &y)| ext.add(ext.mul(a, x), y)).collect();
        let (pu, pv, pc) = (spec.project_word(&u).unwrap(), spec.project_word(&v).unwrap(), spec.project_word(&combo).unwrap());
        for i in 0..spec.n() {
            prop_assert_eq!(pc.get(0, i), base.add(base.mul(a, pu.get(0, i)), pv.get(0, i)));
        }
    }

    #[test]
    fn recovery_round_trip_f64(f in message(f64_spec())) {
        let spec = f64_spec();
        let rows = spec.virtual_projections(&f).unwrap();
        prop_assert_eq!(spec.recover_peeling(&rows).unwrap(), f.clone());
        prop_assert_eq!(spec.recover_joint(&rows).unwrap(), f);
    }

    #[test]
    fn columns_stay_local(f in message(f81_spec()), positions in proptest::collection::btree_set(0..27usize, 0..8), offset in 1..81u32) {
        let spec = f81_spec();
        let ext = spec.tower().ext();
        let c = spec.code().encode(&f).unwrap();
        let mut w = c.clone();
        for &i in &positions {
            w[i] = ext.add(w[i], Elem(offset));
        }
        let changed = spec.project_word(&w).unwrap().differing_columns(&spec.project_word(&c).unwrap());
        prop_assert!(changed.iter().all(|i| positions.contains(i)));
    }

    #[test]
    fn division_undoes_multiplication(q in function(9), p in function(6)) {
        let (f, curve) = hermitian3();
        prop_assume!(!p.is_zero());
        let product = curve.mul(f, &q, &p);
        prop_assert_eq!(curve.exact_divide(f, &product, &p).unwrap(), q.clone());
        if !q.is_zero() {
            prop_assert_eq!(curve.pole_order(&product).unwrap(), curve.pole_order(&q).unwrap() + curve.pole_order(&p).unwrap());
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(g in function(10), h in function(7), i in 0..27usize) {
        let (f, curve) = hermitian3();
        let pt = curve.affine_points(f)[i];
        let (gv, hv) = (curve.evaluate(f, &g, pt), curve.evaluate(f, &h, pt));
        prop_assert_eq!(curve.evaluate(f, &g.add(f, &h), pt), f.add(gv, hv));
        prop_assert_eq!(curve.evaluate(f, &curve.mul(f, &g, &h), pt), f.mul(gv, hv));
    }
}

#[test]
fn lift_inverts_projection_on_f4096() {
    let tower = ExtensionTower::new(Field::gf(2, 6).unwrap(), 2).unwrap();
    for b in tower.ext().elements() {
        assert_eq!(tower.lift(&tower.project(b)).unwrap(), b);
    }
}

#[test]
fn hermitian_point_counts() {
    for q0 in [2u32, 3] {
        let f = Field::gf(q0, 2).unwrap();
        let curve = CurveModel::hermitian(f.clone(), q0).unwrap();
        assert_eq!(curve.affine_points(&f).len() as u32, q0.pow(3));
    }
}

#[test]
fn basis_sizes_follow_the_semigroup() {
    let (_, curve) = hermitian3();
    for beta in 0..40i64 {
        let count = (0..=beta).filter(|&s| (0..=s / 3).any(|a| (s - 3 * a) % 4 == 0)).count();
        assert_eq!(curve.rr_dimension(beta), count);
        if beta >= 5 {
            assert_eq!(count as i64, beta + 1 - 3);
        }
    }
    let orders: Vec<u32> = curve.rr_basis(39).iter().map(|&m| curve.monomial_pole_order(m)).collect();
    assert!(orders.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(curve.rr_basis(6), vec![Monomial::new(0, 0), Monomial::new(1, 0), Monomial::new(0, 1), Monomial::new(2, 0)]);
}
