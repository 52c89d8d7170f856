//! Bounded exhaustive search for implementations of a target over a language.

use super::SearchBounds;
use crate::boolfn::{BooleanFunction, TruthTable};
use crate::csp::CspInstance;
use crate::error::Result;
use crate::hypergraph::Engine;

/// A CSP instance whose satisfying-extension counts over `distinguished` equal `target`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImplementationCertificate {
    pub instance: CspInstance<u64>,
    pub distinguished: Vec<usize>,
    pub target: TruthTable<u64>,
}

impl ImplementationCertificate {
    /// Recounts the extensions of every assignment to the distinguished variables.
    pub fn verify(&self, engine: &Engine) -> Result<bool> {
        if self.target.arity() != self.distinguished.len() {
            return Ok(false);
        }
        let counts = self.instance.weight_sums(&self.distinguished, engine)?;
        Ok(counts.as_slice() == self.target.values())
    }

    /// Auxiliary (summed-out) variables.
    pub fn auxiliary(&self) -> Vec<usize> {
        (0..self.instance.variables()).filter(|v| !self.distinguished.contains(v)).collect()
    }
}

/// Search result; `examined` counts candidate instances whose counts were evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub found: Option<ImplementationCertificate>,
    pub examined: u64,
}

/// Every `(function, scope)` pair over `vars` variables, repeats allowed, in
/// function-major, lexicographic-scope order.
pub(crate) fn constraint_atoms(language: &[BooleanFunction], vars: usize) -> Vec<(usize, Vec<usize>)> {
    let mut atoms = Vec::new();
    for (fi, f) in language.iter().enumerate() {
        let k = f.arity();
        let total = vars.checked_pow(k as u32).unwrap_or(0);
        for code in 0..total {
            let mut scope = vec![0; k];
            let mut c = code;
            for slot in scope.iter_mut().rev() {
                *slot = c % vars;
                c /= vars;
            }
            atoms.push((fi, scope));
        }
    }
    atoms
}

/// Extension counts of a conjunction of atoms, bucketed over the first `t` variables.
fn counts(language: &[BooleanFunction], atoms: &[&(usize, Vec<usize>)], t: usize, vars: usize) -> Vec<u64> {
    let mut out = vec![0u64; 1 << t];
    for sigma in 0u64..1 << vars {
        let bit = |v: usize| (sigma >> (vars - 1 - v)) & 1 == 1;
        let ok = atoms.iter().all(|(fi, scope)| {
            let idx = scope.iter().fold(0usize, |b, &v| (b << 1) | bit(v) as usize);
            language[*fi].value(idx)
        });
        if ok {
            out[(sigma >> (vars - t)) as usize] += 1;
        }
    }
    out
}

/// Iterative deepening over constraint count, then auxiliary count. Candidates are
/// multisets of atoms in which every auxiliary variable occurs; the first match in
/// that order is returned.
pub fn implement_search(language: &[BooleanFunction], target: &TruthTable<u64>, bounds: &SearchBounds) -> SearchOutcome {
    let t = target.arity();
    let mut examined = 0u64;
    for c in 1..=bounds.max_constraints {
        for m in 0..=bounds.max_aux {
            let vars = t + m;
            if vars == 0 || vars > 24 {
                continue;
            }
            let atoms = constraint_atoms(language, vars);
            if atoms.is_empty() {
                continue;
            }
            let mut pick = vec![0usize; c];
            loop {
                let chosen: Vec<&(usize, Vec<usize>)> = pick.iter().map(|&i| &atoms[i]).collect();
                let uses_all_aux = (t..vars).all(|v| chosen.iter().any(|(_, s)| s.contains(&v)));
                if uses_all_aux {
                    examined += 1;
                    if counts(language, &chosen, t, vars).as_slice() == target.values() {
                        return SearchOutcome {
                            found: Some(certificate(language, &chosen, t, vars, target)),
                            examined,
                        };
                    }
                }
                if !next_multiset(&mut pick, atoms.len()) {
                    break;
                }
            }
        }
    }
    SearchOutcome { found: None, examined }
}

/// Advances a nondecreasing index vector; false once exhausted.
fn next_multiset(pick: &mut [usize], n: usize) -> bool {
    let Some(i) = (0..pick.len()).rev().find(|&i| pick[i] + 1 < n) else {
        return false;
    };
    let v = pick[i] + 1;
    for p in &mut pick[i..] {
        *p = v;
    }
    true
}

fn certificate(language: &[BooleanFunction], chosen: &[&(usize, Vec<usize>)], t: usize, vars: usize, target: &TruthTable<u64>) -> ImplementationCertificate {
    let mut inst = CspInstance::new(vars);
    let mut ids = vec![None; language.len()];
    for (fi, scope) in chosen {
        let id = *ids[*fi].get_or_insert_with(|| {
            inst.add_function(&format!("f{fi}"), language[*fi].to_table())
                .expect("fresh function name")
        });
        inst.add_constraint(id, scope.clone()).expect("scope within range");
    }
    ImplementationCertificate {
        instance: inst,
        distinguished: (0..t).collect(),
        target: target.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(aux: usize, constraints: usize) -> SearchBounds {
        SearchBounds { max_aux: aux, max_constraints: constraints, ..SearchBounds::default() }
    }

    #[test]
    fn allone_implements_delta1() {
        let out = implement_search(&[BooleanFunction::all_one(2)], &BooleanFunction::delta1().to_table(), &bounds(2, 2));
        let cert = out.found.unwrap();
        assert!(cert.verify(&Engine::default()).unwrap());
        assert_eq!(cert.instance.constraints().len(), 1);
    }

    #[test]
    fn nae_and_pin_implement_or() {
        let lang = [BooleanFunction::not_all_equal(3), BooleanFunction::delta0()];
        let out = implement_search(&lang, &BooleanFunction::or().to_table(), &bounds(1, 2));
        let cert = out.found.unwrap();
        assert!(cert.verify(&Engine::default()).unwrap());
        assert_eq!(cert.auxiliary().len(), 1);
    }

    #[test]
    fn implies_never_implements_delta0() {
        let out = implement_search(&[BooleanFunction::implies()], &BooleanFunction::delta0().to_table(), &bounds(2, 4));
        assert!(out.found.is_none());
        assert!(out.examined > 0);
    }

    #[test]
    fn multiset_enumeration_count() {
        let mut pick = vec![0usize; 3];
        let mut n = 1;
        while next_multiset(&mut pick, 5) {
            n += 1;
        }
        assert_eq!(n, 35);
    }
}
