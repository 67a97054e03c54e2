mod common;

use common::*;
use cubica::{apply_map, line_through, roots_cubic, ProjPoint, Scalar};
use proptest::prelude::*;

proptest! {
    #[test]
    fn map_then_inverse_is_identity(a in invertible_map(), p in prop::array::uniform3(disc())) {
        prop_assume!(p.iter().map(|z| z.norm()).fold(0.0, f64::max) > 0.1);
        let p = ProjPoint::from_complex(p).unwrap();
        let back = apply_map(&a.inverse(), &apply_map(&a, &p));
        prop_assert!(back.distance(&p) < 1e-9, "{}", back.distance(&p));
    }

    #[test]
    fn vieta_recovers_coefficients(c in prop::array::uniform4(disc())) {
        prop_assume!(c[0].norm() > 0.05);
        let s = c.map(Scalar::Float);
        let r = roots_cubic(&s[0], &s[1], &s[2], &s[3]).unwrap().map(|x| x.to_complex());
        let lead = c[0];
        let rebuilt = [
            lead,
            -lead * (r[0] + r[1] + r[2]),
            lead * (r[0] * r[1] + r[0] * r[2] + r[1] * r[2]),
            -lead * r[0] * r[1] * r[2],
        ];
        let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in 0..4 {
            prop_assert!((rebuilt[i] - c[i]).norm() <= 1e-9 * scale, "coefficient {i}");
        }
    }

    #[test]
    fn line_through_is_symmetric(p in prop::array::uniform3(disc()), q in prop::array::uniform3(disc())) {
        let (Ok(p), Ok(q)) = (ProjPoint::from_complex(p), ProjPoint::from_complex(q)) else { return Ok(()) };
        prop_assume!(p.distance(&q) > 1e-3);
        let (Ok(a), Ok(b)) = (line_through(&p, &q), line_through(&q, &p)) else { return Ok(()) };
        prop_assert!(a.approx_eq(&b, 1e-9));
        prop_assert!(a.contains(&p, 1e-9) && a.contains(&q, 1e-9));
    }

    #[test]
    fn exact_map_round_trip(m in prop::array::uniform3(prop::array::uniform3(-5i64..5)), p in prop::array::uniform3(-9i64..9)) {
        let (Ok(a), Ok(p)) = (cubica::ProjMap::from_ints(m), ProjPoint::from_ints(p[0], p[1], p[2])) else { return Ok(()) };
        let back = apply_map(&a.inverse(), &apply_map(&a, &p));
        prop_assert!(back.is_exact());
        prop_assert!(back.approx_eq(&p, 0.0));
    }
}

#[test]
fn exact_rational_arithmetic() {
    let a = Scalar::ratio(1, 3) + Scalar::ratio(1, 6);
    assert!(a.is_exact());
    assert_eq!(a.to_string(), "1/2");
    let x: Scalar = "3/4".parse().unwrap();
    assert_eq!(serde_json::to_string(&(x * Scalar::int(2))).unwrap(), "\"3/2\"");
}
