//! The trichotomy decision for a finite Boolean constraint language.

use crate::boolfn::BooleanFunction;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every function affine: exact counting in polynomial time.
    FpAffine,
    /// Some function non-affine, all in IM2.
    BisEquivalent,
    /// A non-affine function and a function outside IM2.
    NpHard,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::FpAffine => "FP (affine)",
            Verdict::BisEquivalent => "#BIS-equivalent",
            Verdict::NpHard => "NP-hard",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionEvidence {
    pub affine: bool,
    pub in_im2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageClassification {
    pub verdict: Verdict,
    pub evidence: Vec<FunctionEvidence>,
    /// Index of the first non-affine function.
    pub non_affine: Option<usize>,
    /// Index of the first function outside IM2 (only reported for NP-hard languages).
    pub outside_im2: Option<usize>,
    /// `f1(x) f2(y)` for the two culprits: neither affine nor in IM2.
    pub product: Option<BooleanFunction>,
    pub notes: Vec<String>,
}

/// Decides the verdict from the affine and IM2 closure tests alone.
pub fn classify_language(language: &[BooleanFunction]) -> LanguageClassification {
    let evidence: Vec<FunctionEvidence> = language
        .iter()
        .map(|f| FunctionEvidence {
            affine: f.is_affine(),
            in_im2: f.is_in_im2(),
        })
        .collect();
    let mut notes = Vec::new();
    if language.is_empty() {
        notes.push("empty language: vacuously affine".to_string());
    }
    let non_affine = evidence.iter().position(|e| !e.affine);
    let outside = evidence.iter().position(|e| !e.in_im2);
    let (verdict, outside_im2, product) = match (non_affine, outside) {
        (None, _) => (Verdict::FpAffine, None, None),
        (Some(_), None) => (Verdict::BisEquivalent, None, None),
        (Some(a), Some(b)) => {
            let product = match language[a].product_concat(&language[b]) {
                Ok(p) => Some(p),
                Err(e) => {
                    notes.push(format!("product evidence skipped: {e}"));
                    None
                }
            };
            (Verdict::NpHard, Some(b), product)
        }
    };
    LanguageClassification {
        verdict,
        evidence,
        non_affine,
        outside_im2,
        product,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let c = classify_language(&[BooleanFunction::even(3), BooleanFunction::equality(2)]);
        assert_eq!(c.verdict, Verdict::FpAffine);
        assert_eq!(classify_language(&[BooleanFunction::implies()]).verdict, Verdict::BisEquivalent);
        let c = classify_language(&[BooleanFunction::or()]);
        assert_eq!(c.verdict, Verdict::NpHard);
        assert_eq!((c.non_affine, c.outside_im2), (Some(0), Some(0)));
        let p = c.product.unwrap();
        assert!(!p.is_affine() && !p.is_in_im2());
        assert_eq!(classify_language(&[]).verdict, Verdict::FpAffine);
    }

    #[test]
    fn mixed_culprits() {
        let c = classify_language(&[BooleanFunction::xor(), BooleanFunction::implies()]);
        assert_eq!(c.verdict, Verdict::NpHard);
        assert_eq!((c.non_affine, c.outside_im2), (Some(1), Some(0)));
        let p = c.product.unwrap();
        assert!(!p.is_affine() && !p.is_in_im2());
    }

    fn arb_function() -> impl Strategy<Value = BooleanFunction> {
        (1usize..=3).prop_flat_map(|k| proptest::collection::vec(any::<bool>(), 1 << k).prop_map(move |t| BooleanFunction::new(k, t).unwrap()))
    }

    proptest! {
        #[test]
        fn adding_functions_never_lowers_the_verdict(
            a in proptest::collection::vec(arb_function(), 0..4),
            b in proptest::collection::vec(arb_function(), 0..3),
        ) {
            let before = classify_language(&a).verdict;
            let after = classify_language(&[a.clone(), b].concat()).verdict;
            prop_assert!(after >= before);
        }
    }
}
