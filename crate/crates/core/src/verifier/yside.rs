use num_bigint::BigInt;
use serde::Serialize;

use super::VerifyError;
use crate::exact::determinant;
use crate::lattice::{discriminant_group, enumerate_integral_overlattices, p_elementary_and_length};
use crate::surface::{surface_euler_number, SurfaceConfig, Y_A2_CURVES};

/// Curves spanning the sublattice whose discriminant is cyclic of order 7.
pub const Y_ORDER7_CURVES: [&str; 3] = ["E", "A41", "A42"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct YSideReport {
    pub euler_number: i64,
    /// `b2(Y) = e(Y) - 2` for `q = p_g = 0`.
    pub b2: i64,
    pub rank_r: usize,
    pub rank_r_perp: i64,
    pub r_determinant: String,
    pub r_discriminant_orders: Vec<String>,
    pub r_three_elementary: bool,
    pub r_length: usize,
    pub r_overlattices: usize,
    pub r_overlattice_determinants: Vec<String>,
    pub order7_determinant: String,
    pub order7_group: Vec<String>,
    /// Pairs `(x, y)` with `x` in the order-7 set, `y` in `R` and `x·y ≠ 0`.
    pub order7_not_orthogonal: Vec<(String, String)>,
}

pub fn y_side_checks(y: &SurfaceConfig) -> Result<YSideReport, VerifyError> {
    let euler_number = surface_euler_number(y);
    let b2 = euler_number - 2;
    let r = y.lattice(&Y_A2_CURVES)?;
    let r_group = discriminant_group(&r)?;
    let (r_three_elementary, r_length) = p_elementary_and_length(&r, 3)?;
    let certs = enumerate_integral_overlattices(&r, 3)?;
    let sub = y.lattice(&Y_ORDER7_CURVES)?;
    let sub_group = discriminant_group(&sub)?;
    let mut order7_not_orthogonal = Vec::new();
    for a in Y_ORDER7_CURVES {
        for b in Y_A2_CURVES {
            if y.pairing(a, b)? != 0 {
                order7_not_orthogonal.push((a.to_owned(), b.to_owned()));
            }
        }
    }
    let strings = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    Ok(YSideReport {
        euler_number,
        b2,
        rank_r: r.rank(),
        rank_r_perp: b2 - r.rank() as i64,
        r_determinant: r.determinant().to_string(),
        r_discriminant_orders: strings(r_group.cyclic_orders()),
        r_three_elementary,
        r_length,
        r_overlattices: certs.len(),
        r_overlattice_determinants: certs
            .iter()
            .map(|c| determinant(&c.new_gram).map(|d| d.to_string()))
            .collect::<Result<_, _>>()?,
        order7_determinant: sub.determinant().to_string(),
        order7_group: strings(sub_group.cyclic_orders()),
        order7_not_orthogonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_config_y;

    #[test]
    fn y_values() {
        let r = y_side_checks(&build_config_y()).unwrap();
        assert_eq!((r.euler_number, r.b2, r.rank_r, r.rank_r_perp), (12, 10, 6, 4));
        assert_eq!(r.r_determinant, "27");
        assert_eq!(r.r_discriminant_orders, ["3", "3", "3"]);
        assert!(r.r_three_elementary);
        assert_eq!(r.r_length, 3);
        assert_eq!(r.r_overlattices, 4);
        assert!(r.r_overlattice_determinants.iter().all(|d| d == "3"));
        assert_eq!(r.order7_determinant, "-7");
        assert_eq!(r.order7_group, ["7"]);
        assert!(r.order7_not_orthogonal.is_empty());
    }
}
