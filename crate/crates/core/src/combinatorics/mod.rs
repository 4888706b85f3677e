//! Set systems and order structures on enumerations of frequencies.

mod cone;
mod schur;
mod signed;

pub use cone::{
    is_extremely_lacunary, is_strongly_lacunary_ordered, AxiomReport, Cone, ConeOrder, ExtremeLacunarity,
    DEFAULT_SEARCH_BOUND,
};
pub use schur::{
    admissible_sign_vectors, d_set, g_set, g_set_pre_election, preorder_less, satisfies_schur_conditions,
    schur_bounded, schur_exact_bound, schur_set, schur_set_via_gaps, MAX_SPAN,
};
pub use signed::{
    alt_sum_set, riesz_support, riesz_support_with_cap, s_set, s_set_with_cap, signed_sum, ALT_CAP, DEFAULT_CAP,
};

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::freq::{Enumeration, Window};

/// k_{j+1} > 2k_j for every consecutive pair.
pub fn is_strongly_lacunary(e: &Enumeration<i64>) -> bool {
    e.entries().windows(2).all(|w| w[1] > 2 * w[0])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub holds: bool,
    pub witnesses: Vec<i64>,
}

/// Checks S((k_j)) ∩ w ⊆ Schur((k_j)) ∩ Riesz(K).
pub fn check_inclusion_s_in_schur_riesz(e: &Enumeration<i64>, w: Window) -> Result<InclusionReport> {
    let s = s_set(e)?;
    let riesz = riesz_support(e.entries())?;
    let in_window: Vec<i64> = s.members.iter().copied().filter(|m| w.contains(*m)).collect();
    let schur = match schur_exact_bound(e, w) {
        Some(b) => schur_set(e, w, b)?,
        // members of S carry coefficients in {−1,0,1}; a larger bound only adds candidates
        None => schur_set(e, w, 2)?,
    };
    let witnesses: Vec<i64> =
        in_window.into_iter().filter(|m| !(schur.contains(m) && riesz.contains(m))).collect();
    Ok(InclusionReport { holds: witnesses.is_empty(), witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn lacunarity_examples() {
        assert!(is_strongly_lacunary(&Enumeration::new(vec![1, 3, 7, 15]).unwrap()));
        assert!(!is_strongly_lacunary(&Enumeration::new(vec![1, 2, 4]).unwrap()));
        assert!(is_strongly_lacunary(&Enumeration::new(vec![5]).unwrap()));
    }

    #[test]
    fn inclusion_examples() {
        for (k, w) in [(vec![1, 3, 7], (-20, 20)), (vec![1, 3], (-10, 10)), (vec![2, 5, 11, 23], (-40, 40))] {
            let e = Enumeration::new(k).unwrap();
            let r = check_inclusion_s_in_schur_riesz(&e, Window::new(w.0, w.1).unwrap()).unwrap();
            assert!(r.holds, "{r:?}");
        }
    }
}
