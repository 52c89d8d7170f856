//! CSP instances over weighted languages, exact counting, language
//! classification and the bipartite independent-set reduction.

mod bis;
mod gauss;
mod language;

pub use bis::{bis_reduction, BipartiteGraph, BisReduction};
pub use gauss::gauss_count;
pub use language::{classify_language, FunctionEvidence, LanguageClassification, Verdict};

use crate::boolfn::{BooleanFunction, TruthTable};
use crate::error::{Error, Result};
use crate::format::{key_values, parse_function_line, parse_rational, rational_to_string, required_usize, strip_comment, FunctionRecord};
use crate::hypergraph::{Domain, Engine, Factor, MarginalTable, TupleHypergraph};
use crate::weight::Weight;
use crate::Rational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::borrow::Cow;

/// One constraint: a function of the language applied to a variable tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub function: usize,
    pub scope: Vec<usize>,
}

/// Variables `0..n`, a language of named tables and a list of constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct CspInstance<W> {
    variables: usize,
    names: Vec<String>,
    functions: Vec<TruthTable<W>>,
    constraints: Vec<Constraint>,
    repeat_free: bool,
}

impl<W: Weight> CspInstance<W> {
    pub fn new(variables: usize) -> Self {
        CspInstance {
            variables,
            names: Vec::new(),
            functions: Vec::new(),
            constraints: Vec::new(),
            repeat_free: false,
        }
    }

    /// Instance whose constraints must use distinct variables.
    pub fn new_repeat_free(variables: usize) -> Self {
        CspInstance {
            repeat_free: true,
            ..Self::new(variables)
        }
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn add_variable(&mut self) -> usize {
        self.variables += 1;
        self.variables - 1
    }

    pub fn functions(&self) -> &[TruthTable<W>] {
        &self.functions
    }

    pub fn function_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// True when the header demands distinct variables per constraint.
    pub fn requires_repeat_free(&self) -> bool {
        self.repeat_free
    }

    /// Registers a function; re-registering an identical table returns its index.
    pub fn add_function(&mut self, name: &str, table: TruthTable<W>) -> Result<usize> {
        if let Some(i) = self.function_index(name) {
            if self.functions[i] != table {
                return Err(Error::Domain(format!("function {name:?} defined twice")));
            }
            return Ok(i);
        }
        self.names.push(name.to_string());
        self.functions.push(table);
        Ok(self.functions.len() - 1)
    }

    pub fn add_constraint(&mut self, function: usize, scope: Vec<usize>) -> Result<()> {
        let table = self
            .functions
            .get(function)
            .ok_or_else(|| Error::Domain(format!("no function with index {function}")))?;
        if table.arity() != scope.len() {
            return Err(Error::ArityMismatch {
                expected: table.arity(),
                found: scope.len(),
            });
        }
        if let Some(&v) = scope.iter().find(|&&v| v >= self.variables) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.variables,
            });
        }
        if self.repeat_free && has_repeat(&scope) {
            return Err(Error::RepeatedVertex(self.constraints.len()));
        }
        self.constraints.push(Constraint { function, scope });
        Ok(())
    }

    /// `d_v`: total number of slots holding `v`.
    pub fn variable_degree(&self, v: usize) -> usize {
        self.constraints.iter().flat_map(|c| &c.scope).filter(|&&u| u == v).count()
    }

    /// Maximum variable degree.
    pub fn degree(&self) -> usize {
        let mut d = vec![0usize; self.variables];
        for &v in self.constraints.iter().flat_map(|c| &c.scope) {
            d[v] += 1;
        }
        d.into_iter().max().unwrap_or(0)
    }

    /// True when no constraint repeats a variable.
    pub fn is_repeat_free(&self) -> bool {
        self.constraints.iter().all(|c| !has_repeat(&c.scope))
    }

    fn factors(&self) -> Vec<Factor<'_, W>> {
        self.constraints
            .iter()
            .map(|c| Factor {
                table: Cow::Borrowed(self.functions[c.function].values()),
                vars: Cow::Borrowed(&c.scope[..]),
            })
            .collect()
    }

    /// Weight sums bucketed by the spins of `watched`.
    pub fn weight_sums(&self, watched: &[usize], engine: &Engine) -> Result<Vec<W>> {
        engine.sums(self.variables, &self.factors(), &vec![Domain::Free; self.variables], watched)
    }

    /// `w_I(sigma)` for one assignment.
    pub fn weight_of(&self, sigma: &[bool]) -> W {
        self.constraints.iter().fold(W::one(), |acc, c| {
            let idx = c.scope.iter().fold(0usize, |b, &v| (b << 1) | sigma[v] as usize);
            acc * self.functions[c.function].value(idx).clone()
        })
    }

    /// Exact `Z_I` by enumeration.
    pub fn brute_count(&self, engine: &Engine) -> Result<W> {
        Ok(self.weight_sums(&[], engine)?.swap_remove(0))
    }

    /// Exact Gibbs marginal of `vars`.
    pub fn marginals(&self, vars: &[usize], engine: &Engine) -> Result<MarginalTable> {
        let sums = self.weight_sums(vars, engine)?;
        let z = sums.iter().fold(Rational::zero(), |a, w| a + w.to_rational());
        if z.is_zero() {
            return Err(Error::InstanceUnsatisfiable("the partition function is zero".into()));
        }
        Ok(MarginalTable::new(vars.to_vec(), sums.iter().map(|w| w.to_rational() / &z).collect()))
    }

    /// Converts every table to another scalar type.
    pub fn map<V: Weight>(&self, f: impl Fn(&W) -> V) -> CspInstance<V> {
        CspInstance {
            variables: self.variables,
            names: self.names.clone(),
            functions: self.functions.iter().map(|t| t.map(&f)).collect(),
            constraints: self.constraints.clone(),
            repeat_free: self.repeat_free,
        }
    }

    /// The language as Boolean functions (every table must be 0/1-valued).
    pub fn boolean_language(&self) -> Result<Vec<BooleanFunction>> {
        self.functions.iter().map(TruthTable::to_boolean).collect()
    }

    /// Text form: header, one `fn` record per function, one `c` line per constraint.
    pub fn to_text(&self) -> String {
        let mut s = format!("instance n={}{}\n", self.variables, if self.repeat_free { " repeatfree" } else { "" });
        for (name, t) in self.names.iter().zip(&self.functions) {
            s.push_str(&table_record(name, t));
            s.push('\n');
        }
        for c in &self.constraints {
            s.push_str("c ");
            s.push_str(&self.names[c.function]);
            for v in &c.scope {
                s.push_str(&format!(" {v}"));
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = InstanceDoc {
            n: self.variables,
            repeat_free: self.repeat_free,
            functions: self
                .names
                .iter()
                .zip(&self.functions)
                .map(|(name, t)| FunctionDoc {
                    name: name.clone(),
                    arity: t.arity(),
                    table: t.values().iter().map(|w| rational_to_string(&w.to_rational())).collect(),
                })
                .collect(),
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintDoc {
                    function: self.names[c.function].clone(),
                    scope: c.scope.clone(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("instance serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_value(value.clone()).map_err(|e| Error::Domain(format!("invalid instance JSON: {e}")))?;
        let mut inst = if doc.repeat_free {
            Self::new_repeat_free(doc.n)
        } else {
            Self::new(doc.n)
        };
        for f in doc.functions {
            let values = f
                .table
                .iter()
                .map(|s| {
                    let r = parse_rational(s)?;
                    W::from_rational(&r).ok_or_else(|| Error::Domain(format!("{s} is not representable")))
                })
                .collect::<Result<Vec<W>>>()?;
            inst.add_function(&f.name, TruthTable::new(f.arity, values)?)?;
        }
        for c in doc.constraints {
            let i = inst
                .function_index(&c.function)
                .ok_or_else(|| Error::Domain(format!("undeclared function {:?}", c.function)))?;
            inst.add_constraint(i, c.scope)?;
        }
        Ok(inst)
    }

    /// Parses the text form; `preloaded` functions may be referenced without an inline record.
    pub fn parse_with(text: &str, preloaded: &[FunctionRecord]) -> Result<Self> {
        let mut inst: Option<Self> = None;
        let mut pending: Vec<(usize, String, Vec<usize>)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("instance") => {
                    if inst.is_some() {
                        return Err(Error::parse(line_no, "second instance header"));
                    }
                    let rest: Vec<&str> = words.collect();
                    let repeat_free = rest.contains(&"repeatfree");
                    let kv = key_values(rest.into_iter().filter(|w| *w != "repeatfree"), line_no)?;
                    let n = required_usize(&kv, "n", line_no)?;
                    inst = Some(if repeat_free { Self::new_repeat_free(n) } else { Self::new(n) });
                }
                Some("fn") => {
                    let target = inst.as_mut().ok_or_else(|| Error::parse(line_no, "fn before instance header"))?;
                    let rec = parse_function_line(line, line_no)?;
                    let table = record_table::<W>(&rec).map_err(|e| Error::parse(line_no, e.to_string()))?;
                    target.add_function(rec.name(), table).map_err(|e| Error::parse(line_no, e.to_string()))?;
                }
                Some("c") => {
                    if inst.is_none() {
                        return Err(Error::parse(line_no, "constraint before instance header"));
                    }
                    let name = words.next().ok_or_else(|| Error::parse(line_no, "missing function name"))?;
                    let scope = words
                        .map(|w| w.parse::<usize>().map_err(|_| Error::parse(line_no, format!("bad variable {w:?}"))))
                        .collect::<Result<Vec<_>>>()?;
                    pending.push((line_no, name.to_string(), scope));
                }
                Some(other) => return Err(Error::parse(line_no, format!("unknown record {other:?}"))),
                None => {}
            }
        }
        let mut inst = inst.ok_or_else(|| Error::parse(1, "missing `instance n=<vars>` header"))?;
        for (line_no, name, scope) in pending {
            let idx = match inst.function_index(&name) {
                Some(i) => i,
                None => {
                    let rec = preloaded
                        .iter()
                        .find(|r| r.name() == name)
                        .ok_or_else(|| Error::parse(line_no, format!("undeclared function {name:?}")))?;
                    let table = record_table::<W>(rec).map_err(|e| Error::parse(line_no, e.to_string()))?;
                    inst.add_function(&name, table)?
                }
            };
            inst.add_constraint(idx, scope).map_err(|e| Error::parse(line_no, e.to_string()))?;
        }
        Ok(inst)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, &[])
    }
}

fn has_repeat(scope: &[usize]) -> bool {
    (1..scope.len()).any(|i| scope[..i].contains(&scope[i]))
}

fn record_table<W: Weight>(rec: &FunctionRecord) -> Result<TruthTable<W>> {
    let r = rec.to_rational();
    let values = r
        .values()
        .iter()
        .map(|v| W::from_rational(v).ok_or_else(|| Error::Domain(format!("{} is not representable", rational_to_string(v)))))
        .collect::<Result<Vec<W>>>()?;
    TruthTable::new(r.arity(), values)
}

fn table_record<W: Weight>(name: &str, t: &TruthTable<W>) -> String {
    match t.to_boolean() {
        Ok(f) => crate::format::function_to_text(name, &f),
        Err(_) => crate::format::table_to_text(name, &t.to_rational()),
    }
}

#[derive(Serialize, Deserialize)]
struct FunctionDoc {
    name: String,
    arity: usize,
    table: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ConstraintDoc {
    function: String,
    scope: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    n: usize,
    #[serde(default)]
    repeat_free: bool,
    functions: Vec<FunctionDoc>,
    constraints: Vec<ConstraintDoc>,
}

/// Parses either the text or the JSON form.
pub fn parse_instance<W: Weight>(text: &str) -> Result<CspInstance<W>> {
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Domain(format!("invalid JSON: {e}")))?;
        CspInstance::from_json(&v)
    } else {
        CspInstance::parse(text)
    }
}

/// Instance with one constraint `f(arc)` per hyperarc of `h`.
pub fn instance_from_hypergraph(f: &BooleanFunction, h: &TupleHypergraph) -> Result<CspInstance<u64>> {
    if f.arity() != h.arity() {
        return Err(Error::ArityMismatch {
            expected: h.arity(),
            found: f.arity(),
        });
    }
    let mut inst = CspInstance::new_repeat_free(h.vertex_count());
    let idx = inst.add_function("f", f.to_table())?;
    for arc in h.arcs() {
        inst.add_constraint(idx, arc.clone())?;
    }
    Ok(inst)
}

/// Hypergraph of a single-function repeat-free instance.
pub fn hypergraph_from_instance<W: Weight>(inst: &CspInstance<W>) -> Result<TupleHypergraph> {
    let used: Vec<usize> = {
        let mut u: Vec<usize> = inst.constraints.iter().map(|c| c.function).collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    if used.len() > 1 {
        return Err(Error::Precondition("hypergraph form needs a single-function instance".into()));
    }
    let arity = used.first().map_or_else(|| inst.functions.first().map_or(0, TruthTable::arity), |&i| inst.functions[i].arity());
    TupleHypergraph::with_arcs(inst.variables, arity, inst.constraints.iter().map(|c| c.scope.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::partition_function;
    use proptest::prelude::*;

    pub(crate) const INTRO: &str = "instance n=4\nfn nae arity=3 table=01111110\nc nae 0 1 2\nc nae 0 1 3\n";

    #[test]
    fn intro_instance() {
        let inst: CspInstance<u64> = CspInstance::parse(INTRO).unwrap();
        assert_eq!(inst.brute_count(&Engine::default()).unwrap(), 10);
        assert_eq!(inst.degree(), 2);
        assert!(inst.is_repeat_free());
    }

    #[test]
    fn repeated_variables() {
        let text = "instance n=2\nfn r arity=4 table=0110100110010110\nc r 0 0 1 0\n";
        let inst: CspInstance<u64> = CspInstance::parse(text).unwrap();
        assert_eq!(inst.variable_degree(0), 3);
        assert!(!inst.is_repeat_free());
        let strict = "instance n=2 repeatfree\nfn r arity=4 table=0110100110010110\nc r 0 0 1 0\n";
        assert!(matches!(CspInstance::<u64>::parse(strict), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn trivial_counts() {
        let inst: CspInstance<u64> = CspInstance::new(5);
        assert_eq!(inst.brute_count(&Engine::default()).unwrap(), 32);
        let mut inst: CspInstance<u64> = CspInstance::new(1);
        let d0 = inst.add_function("d0", BooleanFunction::delta0().to_table()).unwrap();
        let d1 = inst.add_function("d1", BooleanFunction::delta1().to_table()).unwrap();
        inst.add_constraint(d0, vec![0]).unwrap();
        inst.add_constraint(d1, vec![0]).unwrap();
        assert_eq!(inst.brute_count(&Engine::default()).unwrap(), 0);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "instance n=2\nc g 0 1\n";
        assert!(matches!(CspInstance::<u64>::parse(bad), Err(Error::Parse { line: 2, .. })));
        let bad = "instance n=2\nfn g arity=2 table=0110\nc g 0\n";
        assert!(matches!(CspInstance::<u64>::parse(bad), Err(Error::Parse { line: 3, .. })));
        let bad = "instance n=2\nbogus\n";
        assert!(matches!(CspInstance::<u64>::parse(bad), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn preloaded_functions() {
        let recs = crate::format::parse_functions("fn imp arity=2 table=1101\n").unwrap();
        let inst: CspInstance<u64> = CspInstance::parse_with("instance n=3\nc imp 0 1\nc imp 1 2\n", &recs).unwrap();
        assert_eq!(inst.brute_count(&Engine::default()).unwrap(), 4);
    }

    #[test]
    fn text_and_json_round_trip() {
        let inst: CspInstance<Rational> = CspInstance::parse("instance n=2\nfn w arity=2 table=[1,1/2,1/3,2]\nc w 0 1\nc w 1 0\n").unwrap();
        assert_eq!(CspInstance::<Rational>::parse(&inst.to_text()).unwrap(), inst);
        assert_eq!(CspInstance::<Rational>::from_json(&inst.to_json()).unwrap(), inst);
        let z = inst.brute_count(&Engine::default()).unwrap();
        // 1*1 + (1/2)(1/3) + (1/3)(1/2) + 2*2
        assert_eq!(z, Rational::new(16.into(), 3.into()));
    }

    #[test]
    fn hypergraph_round_trip() {
        let h = TupleHypergraph::with_arcs(4, 3, vec![vec![0, 1, 2], vec![3, 1, 0]]).unwrap();
        let f = BooleanFunction::not_all_equal(3);
        let inst = instance_from_hypergraph(&f, &h).unwrap();
        assert_eq!(hypergraph_from_instance(&inst).unwrap(), h);
        assert_eq!(inst.brute_count(&Engine::default()).unwrap(), partition_function(&f, &h).unwrap());
    }

    proptest! {
        #[test]
        fn repeat_free_count_matches_hypergraph(
            table in proptest::collection::vec(any::<bool>(), 8),
            arcs in proptest::collection::vec(proptest::sample::subsequence(vec![0usize, 1, 2, 3, 4], 3).prop_shuffle(), 0..5),
        ) {
            let f = BooleanFunction::new(3, table).unwrap();
            let h = TupleHypergraph::with_arcs(5, 3, arcs).unwrap();
            let inst = instance_from_hypergraph(&f, &h).unwrap();
            prop_assert_eq!(inst.brute_count(&Engine::default()).unwrap(), partition_function(&f, &h).unwrap());
        }
    }
}
