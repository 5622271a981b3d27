//! Brute-force ground truth on small instances. Every oracle refuses inputs
//! above its configured cap instead of approximating.

mod distinct;
mod hom;
mod small_ball;

pub use distinct::{exact_f, exact_f_with_cap, ExactF};
pub use hom::{exact_hom, exact_hom_with_cap, max_clique, ExactHom, HomKind};
pub use small_ball::{exact_small_ball, exact_small_ball_with_cap, lo_reference, SmallBallInstance};

use serde::{Deserialize, Serialize};

/// Size limits for the exponential oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCaps {
    pub f: usize,
    pub hom: usize,
    pub small_ball: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            f: DEFAULT_F_CAP,
            hom: DEFAULT_HOM_CAP,
            small_ball: DEFAULT_SMALL_BALL_CAP,
        }
    }
}

pub const DEFAULT_F_CAP: usize = 20;
pub const DEFAULT_HOM_CAP: usize = 60;
pub const DEFAULT_SMALL_BALL_CAP: usize = 22;
