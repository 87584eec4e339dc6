use proptest::prelude::*;
use s6v_core::degenerations::{hammersley_height, sample_pointset};
use s6v_core::lattice::{
    first_color_height, parity_height, sample_cs6v, sample_s6v, sample_two_colored_with_boundary, ParameterField,
};
use s6v_core::lmatrix::ColorVector;

fn unit() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0f64..=1.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heights_are_lipschitz_and_monotone(w in 1usize..90, h in 1usize..40, b1 in unit(), b2 in unit(), seed in any::<u64>()) {
        let field = ParameterField::homogeneous(b1, b2).unwrap();
        let big_h = sample_cs6v(w, h, &field, seed).unwrap().height_H().unwrap();
        for y in 0..=h {
            for x in 0..=w {
                if x > 0 {
                    let d = big_h.get(x, y) - big_h.get(x - 1, y);
                    prop_assert!(d == 0 || d == 1);
                }
                if y > 0 {
                    let d = big_h.get(x, y) - big_h.get(x, y - 1);
                    prop_assert!(d == 0 || d == 1);
                }
            }
        }
    }

    #[test]
    fn complement_identity(w in 1usize..130, h in 1usize..40, b1 in unit(), b2 in unit(), seed in any::<u64>()) {
        let field = ParameterField::homogeneous(b1, b2).unwrap();
        let e = sample_s6v(w, h, &field, seed).unwrap();
        let c = e.complement().unwrap();
        prop_assert_eq!(&c.complement().unwrap(), &e);
        let (lower, upper) = (e.height_h().unwrap(), c.height_H().unwrap());
        for y in 0..=h {
            for x in 0..=w {
                prop_assert_eq!(upper.get(x, y) + lower.get(x, y), y as i64);
            }
        }
    }

    #[test]
    fn hammersley_coupling(w in 1usize..60, h in 1usize..60, p in 0.0f64..0.99, seed in any::<u64>()) {
        let field = ParameterField::homogeneous(0.0, 1.0 - p).unwrap();
        let lattice = sample_cs6v(w, h, &field, seed).unwrap().height_H().unwrap();
        prop_assert_eq!(lattice, hammersley_height(&sample_pointset(w, h, p, seed).unwrap()));
    }

    #[test]
    fn first_color_below_projection(
        w in 1usize..20, h in 1usize..20, b1 in unit(), b2 in unit(),
        left in proptest::collection::vec(any::<bool>(), 20), bottom in proptest::collection::vec(any::<bool>(), 20),
        seed in any::<u64>(),
    ) {
        let field = ParameterField::homogeneous(b1, b2).unwrap();
        let word = |b: bool| ColorVector::new(2, (b as u32) << 1).unwrap();
        let left: Vec<_> = left[..h].iter().map(|&b| word(b)).collect();
        let bottom: Vec<_> = bottom[..w].iter().map(|&b| word(b)).collect();
        let e = sample_two_colored_with_boundary(w, h, &field, &left, &bottom, seed).unwrap();
        for y in 0..=h {
            for x in 0..=w {
                prop_assert!(first_color_height(&e, x, y) <= parity_height(&e, x, y));
            }
        }
    }
}
