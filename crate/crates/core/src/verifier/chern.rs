use serde::Serialize;

use super::VerifyError;
use crate::surface::{EulerNumbers, SurfaceConfig};

/// Order of the cyclic cover `Z → X`.
pub const COVER_DEGREE: i64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChernNumbers {
    pub e_x_open: i64,
    /// Points of `Z` over the contracted chains, one per connected chain.
    pub fixed_points: i64,
    pub c2: i64,
    pub chi: i64,
    pub c1_squared: i64,
}

impl ChernNumbers {
    pub fn noether_holds(&self) -> bool {
        self.c1_squared + self.c2 == 12 * self.chi
    }

    pub fn on_bmy_line(&self) -> bool {
        self.c1_squared == 3 * self.c2
    }
}

/// Number of connected components of the union of the named curves.
pub fn connected_components<S: AsRef<str>>(config: &SurfaceConfig, names: &[S]) -> Result<usize, VerifyError> {
    let n = names.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if config.pairing(names[i].as_ref(), names[j].as_ref())? != 0 {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    Ok((0..n).filter(|&i| root(&mut parent, i) == i).count())
}

/// `c2(Z) = 7·e(X⁰) + #fixed points`; `p_g = q = 0` gives `χ = 1`, and
/// Noether's formula gives `c1² = 12χ - c2`.
pub fn chern_pipeline(euler: &EulerNumbers, fixed_points: i64) -> ChernNumbers {
    let c2 = COVER_DEGREE * euler.x_open + fixed_points;
    let chi = 1;
    ChernNumbers {
        e_x_open: euler.x_open,
        fixed_points,
        c2,
        chi,
        c1_squared: 12 * chi - c2,
    }
}
