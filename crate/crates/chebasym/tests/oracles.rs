use chebasym::exact::{norm_check, norm_closed_form, t_difference, t_hahn, t_recurrence, monic_at_scaled_point, Oracle};
use chebasym::numerics::rel_diff;
use chebasym::Error;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;

fn at(k: i64) -> Complex<BigRational> {
    Complex::new(BigRational::from_integer(BigInt::from(k)), BigRational::from_integer(0.into()))
}

#[test]
fn three_routes_agree_on_small_lattices() {
    for nodes in [2usize, 7, 13] {
        for n in 0..nodes {
            for k in 0..nodes as i64 {
                let r = t_recurrence(n, nodes, &at(k)).unwrap();
                assert_eq!(r, t_difference(n, nodes, &at(k)).unwrap());
                assert_eq!(r, t_hahn(n, nodes, &at(k)).unwrap());
            }
        }
    }
}

#[test]
fn orthogonality_on_a_small_lattice() {
    let nodes = 9;
    for n in 0..nodes {
        for m in 0..nodes {
            assert_eq!(norm_check(n, m, nodes).unwrap(), norm_closed_form(n, m, nodes).unwrap());
        }
    }
}

#[test]
fn float_oracle_tracks_exact_oracle() {
    for z in [Complex64::new(-0.3, 0.2), Complex64::new(0.6, -0.1), Complex64::new(1.4, 0.0)] {
        let e = monic_at_scaled_point(80, 160, z, Oracle::Exact).unwrap();
        let f = monic_at_scaled_point(80, 160, z, Oracle::Float { bits: 320 }).unwrap();
        assert!(rel_diff(f, e).unwrap() < 1e-12, "{z}");
    }
}

#[test]
fn float_oracle_detects_lost_digits() {
    // at a lattice node left of a the polynomial is tiny next to the second
    // solution of the recurrence, so 64 bits cannot meet the self-check
    let z = Complex64::new(5.5 / 400.0, 0.0);
    let r = monic_at_scaled_point(200, 400, z, Oracle::Float { bits: 64 });
    assert!(matches!(r, Err(Error::OraclePrecision { bits: 64, .. })), "{r:?}");
    let e = monic_at_scaled_point(200, 400, z, Oracle::Exact).unwrap();
    let f = monic_at_scaled_point(200, 400, z, Oracle::Float { bits: 256 }).unwrap();
    assert!(rel_diff(f, e).unwrap() < 1e-12);
}
