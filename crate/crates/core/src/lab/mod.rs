//! Instance checks of the theorems on discriminants of perturbed map germs.

pub mod corpus;
mod oracle;
mod pencil;
mod theorems;

pub use oracle::{oracle_discriminant, OracleResult};
pub use pencil::{
    atypical_values, atypical_values_by_edges, atypical_values_by_milnor, nu_via_intersection,
    nu_via_intersection_exact, nu_via_milnor, reference_t, source_pencil, target_pencil, AlgebraicValue,
    AtypicalValue, NuResult,
};
pub use theorems::{
    generic_fiber_equisingularity, key_lemma_check, rescaling_check, tc3_check, verify_main_theorem,
    PencilSpec,
};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::bipoly::BiPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    HoldsUpToConstant,
    Fails,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub inputs: BTreeMap<String, String>,
    pub artifacts: BTreeMap<String, String>,
    pub verdict: Verdict,
    /// Present exactly when the verdict is `Fails`: the two sides that differ.
    pub counterexample: Option<BTreeMap<String, String>>,
    pub precision: Vec<u32>,
    pub n_values: Vec<u32>,
}

impl VerificationReport {
    fn new(claim: &str) -> VerificationReport {
        VerificationReport {
            claim: claim.into(),
            inputs: BTreeMap::new(),
            artifacts: BTreeMap::new(),
            verdict: Verdict::Holds,
            counterexample: None,
            precision: Vec::new(),
            n_values: Vec::new(),
        }
    }

    fn input(&mut self, k: &str, v: impl ToString) {
        self.inputs.insert(k.into(), v.to_string());
    }

    fn artifact(&mut self, k: &str, v: impl ToString) {
        self.artifacts.insert(k.into(), v.to_string());
    }

    /// Records a failed comparison with both sides.
    fn fail(&mut self, what: &str, left: impl ToString, right: impl ToString) {
        self.verdict = Verdict::Fails;
        let c = self.counterexample.get_or_insert_with(BTreeMap::new);
        c.insert(format!("{what}.left"), left.to_string());
        c.insert(format!("{what}.right"), right.to_string());
    }

    /// Downgrades `Holds` to `HoldsUpToConstant`.
    fn weaken(&mut self) {
        if self.verdict == Verdict::Holds {
            self.verdict = Verdict::HoldsUpToConstant;
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fails
    }
}

fn uv(p: &BiPoly) -> String {
    p.to_string_in("u", "v")
}
