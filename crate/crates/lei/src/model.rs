//! Kripke models with partial valuations.
//!
//! A model is a finite set of named worlds, a directed accessibility
//! relation, and a valuation that may leave atoms unset. An unset atom is
//! *gappy* at that world: neither true nor false. Models are stored with
//! ordered collections so that serialisation, DOT export and iteration are
//! deterministic.
//!
//! The text format, one directive per line, is:
//!
//! ```text
//! # comment
//! model m2
//! world w0 { p=T q=T }
//! world w1 { }
//! edge w0 w1
//! ```
//!
//! Atoms absent from a world's block are gaps. `edge` lines may appear
//! before the worlds they mention; endpoints are resolved once the whole
//! file has been read.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// One of the three truth values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    /// Definitely true.
    True,
    /// Definitely false.
    False,
    /// Neither true nor false.
    Gap,
}

impl TruthValue {
    /// Strong negation: swaps `True` and `False`, keeps `Gap`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> TruthValue {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Gap => TruthValue::Gap,
        }
    }

    /// Strong conjunction: false dominates, then gap, then true.
    pub fn and(self, rhs: TruthValue) -> TruthValue {
        match (self, rhs) {
            (TruthValue::False, _) | (_, TruthValue::False) => TruthValue::False,
            (TruthValue::Gap, _) | (_, TruthValue::Gap) => TruthValue::Gap,
            (TruthValue::True, TruthValue::True) => TruthValue::True,
        }
    }

    /// Strong disjunction: true dominates, then gap, then false.
    pub fn or(self, rhs: TruthValue) -> TruthValue {
        match (self, rhs) {
            (TruthValue::True, _) | (_, TruthValue::True) => TruthValue::True,
            (TruthValue::Gap, _) | (_, TruthValue::Gap) => TruthValue::Gap,
            (TruthValue::False, TruthValue::False) => TruthValue::False,
        }
    }

    /// Two-valued implication: true unless the antecedent is true and the
    /// consequent is not. Never produces a gap.
    pub fn imp(self, rhs: TruthValue) -> TruthValue {
        if self != TruthValue::True || rhs == TruthValue::True {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    /// True exactly for [`TruthValue::True`].
    pub fn is_true(self) -> bool {
        self == TruthValue::True
    }

    /// True exactly for [`TruthValue::False`].
    pub fn is_false(self) -> bool {
        self == TruthValue::False
    }
}

impl From<bool> for TruthValue {
    fn from(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthValue::True => f.write_str("T"),
            TruthValue::False => f.write_str("F"),
            TruthValue::Gap => f.write_str("G"),
        }
    }
}

/// Errors from model construction and the file format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    /// A world id that does not match `[A-Za-z_][A-Za-z0-9_@]*`.
    #[error("invalid world id `{0}`")]
    InvalidWorldId(String),
    /// An atom name that does not match `[a-z][a-z0-9_]*`.
    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),
    /// A world id used twice in one model.
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    /// A reference to a world the model does not contain.
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    /// A syntax or structural error in a model file.
    #[error("line {line}: {message}")]
    Parse {
        /// 1-based line number.
        line: usize,
        /// What went wrong.
        message: String,
    },
}

fn valid_world_id(id: &str) -> bool {
    let mut chars = id.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '@')
}

fn valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// A Kripke model with a partial valuation.
///
/// World ids may contain `@` only because the announcement transformer
/// names the worlds it creates `base@n`; hand-written ids normally stick
/// to letters, digits and underscores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    name: String,
    worlds: BTreeMap<String, BTreeMap<String, TruthValue>>,
    edges: BTreeSet<(String, String)>,
}

impl KripkeModel {
    /// Creates an empty model.
    pub fn new(name: impl Into<String>) -> Self {
        KripkeModel {
            name: name.into(),
            worlds: BTreeMap::new(),
            edges: BTreeSet::new(),
        }
    }

    /// The model's name, used by serialisation and DOT export.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Renames the model.
    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Adds a world with an all-gap valuation.
    pub fn add_world(&mut self, id: impl Into<String>) -> Result<(), ModelError> {
        let id = id.into();
        if !valid_world_id(&id) {
            return Err(ModelError::InvalidWorldId(id));
        }
        if self.worlds.contains_key(&id) {
            return Err(ModelError::DuplicateWorld(id));
        }
        self.worlds.insert(id, BTreeMap::new());
        Ok(())
    }

    /// Sets an atom's value at a world. Assigning [`TruthValue::Gap`]
    /// removes the entry.
    pub fn set_atom(
        &mut self,
        world: &str,
        atom: impl Into<String>,
        value: TruthValue,
    ) -> Result<(), ModelError> {
        let atom = atom.into();
        if !valid_atom_name(&atom) {
            return Err(ModelError::InvalidAtomName(atom));
        }
        let entry = self
            .worlds
            .get_mut(world)
            .ok_or_else(|| ModelError::UnknownWorld(world.to_string()))?;
        if value == TruthValue::Gap {
            entry.remove(&atom);
        } else {
            entry.insert(atom, value);
        }
        Ok(())
    }

    /// Adds a directed edge. Both endpoints must exist; self-loops are
    /// allowed (the semantics never looks at them).
    pub fn add_edge(&mut self, from: &str, to: &str) -> Result<(), ModelError> {
        for w in [from, to] {
            if !self.worlds.contains_key(w) {
                return Err(ModelError::UnknownWorld(w.to_string()));
            }
        }
        self.edges.insert((from.to_string(), to.to_string()));
        Ok(())
    }

    /// True when the world id exists.
    pub fn has_world(&self, id: &str) -> bool {
        self.worlds.contains_key(id)
    }

    /// World ids in sorted order.
    pub fn world_ids(&self) -> impl Iterator<Item = &str> {
        self.worlds.keys().map(String::as_str)
    }

    /// Number of worlds.
    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    /// The non-gap part of a world's valuation, if the world exists.
    pub fn world_atoms(&self, id: &str) -> Option<&BTreeMap<String, TruthValue>> {
        self.worlds.get(id)
    }

    /// Value of `atom` at `world`; `None` when the world is unknown,
    /// `Some(Gap)` when the world exists but the atom is unset.
    pub fn value(&self, world: &str, atom: &str) -> Option<TruthValue> {
        self.worlds
            .get(world)
            .map(|v| v.get(atom).copied().unwrap_or(TruthValue::Gap))
    }

    /// All edges in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// True when the edge is present.
    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges.contains(&(from.to_string(), to.to_string()))
    }

    /// Successors of a world in sorted order (including a self-loop
    /// target if one was added; callers that follow the semantics should
    /// skip the world itself).
    pub fn successors<'a>(&'a self, world: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges
            .range((world.to_string(), String::new())..)
            .take_while(move |(from, _)| from == world)
            .map(|(_, to)| to.as_str())
    }

    /// Union of the atom names mentioned anywhere in the valuation.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for v in self.worlds.values() {
            out.extend(v.keys().cloned());
        }
        out
    }
}

/// A model together with a designated evaluation point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedModel {
    /// The underlying model.
    pub model: KripkeModel,
    /// The designated world; always a world of `model`.
    pub point: String,
}

impl PointedModel {
    /// Pairs a model with a point, checking that the point exists.
    pub fn new(model: KripkeModel, point: impl Into<String>) -> Result<Self, ModelError> {
        let point = point.into();
        if !model.has_world(&point) {
            return Err(ModelError::UnknownWorld(point));
        }
        Ok(PointedModel { model, point })
    }
}

/// Parses a model from the line-based text format.
pub fn load_model(src: &str) -> Result<KripkeModel, ModelError> {
    let mut model: Option<KripkeModel> = None;
    let mut pending_edges: Vec<(usize, String, String)> = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let directive = words.next().unwrap();
        let err = |message: String| ModelError::Parse {
            line: line_no,
            message,
        };

        match directive {
            "model" => {
                if model.is_some() {
                    return Err(err("duplicate `model` directive".to_string()));
                }
                let name = words
                    .next()
                    .ok_or_else(|| err("`model` needs a name".to_string()))?;
                if words.next().is_some() {
                    return Err(err("trailing input after model name".to_string()));
                }
                model = Some(KripkeModel::new(name));
            }
            "world" => {
                let model = model
                    .as_mut()
                    .ok_or_else(|| err("`world` before `model`".to_string()))?;
                let id = words
                    .next()
                    .ok_or_else(|| err("`world` needs an id".to_string()))?;
                if words.next() != Some("{") {
                    return Err(err(format!("expected `{{` after world id `{id}`")));
                }
                model.add_world(id).map_err(|e| err(e.to_string()))?;
                let mut closed = false;
                for tok in words.by_ref() {
                    if tok == "}" {
                        closed = true;
                        break;
                    }
                    let (atom, value) = tok.split_once('=').ok_or_else(|| {
                        err(format!("expected `atom=T` or `atom=F`, found `{tok}`"))
                    })?;
                    let value = match value {
                        "T" => TruthValue::True,
                        "F" => TruthValue::False,
                        _ => {
                            return Err(err(format!(
                                "atom value must be `T` or `F`, found `{value}` \
                                 (leave an atom out to make it a gap)"
                            )));
                        }
                    };
                    model
                        .set_atom(id, atom, value)
                        .map_err(|e| err(e.to_string()))?;
                }
                if !closed {
                    return Err(err("missing `}` in world block".to_string()));
                }
                if words.next().is_some() {
                    return Err(err("trailing input after `}`".to_string()));
                }
            }
            "edge" => {
                if model.is_none() {
                    return Err(err("`edge` before `model`".to_string()));
                }
                let from = words
                    .next()
                    .ok_or_else(|| err("`edge` needs two world ids".to_string()))?;
                let to = words
                    .next()
                    .ok_or_else(|| err("`edge` needs two world ids".to_string()))?;
                if words.next().is_some() {
                    return Err(err("trailing input after edge".to_string()));
                }
                pending_edges.push((line_no, from.to_string(), to.to_string()));
            }
            other => {
                return Err(err(format!(
                    "unknown directive `{other}` (expected `model`, `world`, or `edge`)"
                )));
            }
        }
    }

    let mut model = model.ok_or(ModelError::Parse {
        line: src.lines().count().max(1),
        message: "missing `model` directive".to_string(),
    })?;
    for (line_no, from, to) in pending_edges {
        model.add_edge(&from, &to).map_err(|e| ModelError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
    }
    Ok(model)
}

/// Serialises a model to the text format. The output is canonical: worlds
/// and edges are sorted, atoms within a world are sorted, and gaps are
/// omitted. `load_model(&save_model(m)) == m` for every model.
pub fn save_model(model: &KripkeModel) -> String {
    let mut out = String::new();
    out.push_str(&format!("model {}\n", model.name));
    for (id, atoms) in &model.worlds {
        out.push_str(&format!("world {id} {{"));
        for (atom, value) in atoms {
            out.push_str(&format!(" {atom}={value}"));
        }
        out.push_str(" }\n");
    }
    for (from, to) in &model.edges {
        out.push_str(&format!("edge {from} {to}\n"));
    }
    out
}

/// Renders the model in Graphviz DOT syntax. Each node shows the world id
/// and its non-gap atoms, true atoms as `p` and false atoms as `¬p`. If
/// `point` names a world, that node is drawn with a double border.
pub fn to_dot(model: &KripkeModel, point: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", model.name));
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=ellipse];\n");
    for (id, atoms) in &model.worlds {
        let mut label = id.clone();
        if !atoms.is_empty() {
            label.push_str("\\n");
            let parts: Vec<String> = atoms
                .iter()
                .map(|(atom, value)| match value {
                    TruthValue::True => atom.clone(),
                    _ => format!("¬{atom}"),
                })
                .collect();
            label.push_str(&parts.join(" "));
        }
        let extra = if point == Some(id.as_str()) {
            ", peripheries=2"
        } else {
            ""
        };
        out.push_str(&format!("  \"{id}\" [label=\"{label}\"{extra}];\n"));
    }
    for (from, to) in &model.edges {
        out.push_str(&format!("  \"{from}\" -> \"{to}\";\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> KripkeModel {
        let mut m = KripkeModel::new("m1");
        m.add_world("w0").unwrap();
        m.add_world("w1").unwrap();
        m.add_world("w2").unwrap();
        m.set_atom("w0", "p", TruthValue::True).unwrap();
        m.set_atom("w1", "p", TruthValue::False).unwrap();
        m.add_edge("w0", "w1").unwrap();
        m.add_edge("w0", "w2").unwrap();
        m
    }

    #[test]
    fn negation_table() {
        assert_eq!(TruthValue::True.neg(), TruthValue::False);
        assert_eq!(TruthValue::False.neg(), TruthValue::True);
        assert_eq!(TruthValue::Gap.neg(), TruthValue::Gap);
    }

    #[test]
    fn conjunction_table() {
        use TruthValue::{False as F, Gap as G, True as T};
        let expect = [
            (T, T, T),
            (T, G, G),
            (T, F, F),
            (G, T, G),
            (G, G, G),
            (G, F, F),
            (F, T, F),
            (F, G, F),
            (F, F, F),
        ];
        for (a, b, c) in expect {
            assert_eq!(a.and(b), c, "{a} & {b}");
        }
    }

    #[test]
    fn disjunction_table() {
        use TruthValue::{False as F, Gap as G, True as T};
        let expect = [
            (T, T, T),
            (T, G, T),
            (T, F, T),
            (G, T, T),
            (G, G, G),
            (G, F, G),
            (F, T, T),
            (F, G, G),
            (F, F, F),
        ];
        for (a, b, c) in expect {
            assert_eq!(a.or(b), c, "{a} | {b}");
        }
    }

    #[test]
    fn implication_is_two_valued() {
        use TruthValue::{False as F, Gap as G, True as T};
        let expect = [
            (T, T, T),
            (T, G, F),
            (T, F, F),
            (G, T, T),
            (G, G, T),
            (G, F, T),
            (F, T, T),
            (F, G, T),
            (F, F, T),
        ];
        for (a, b, c) in expect {
            assert_eq!(a.imp(b), c, "{a} -> {b}");
        }
    }

    #[test]
    fn gap_is_the_default_value() {
        let m = sample();
        assert_eq!(m.value("w0", "p"), Some(TruthValue::True));
        assert_eq!(m.value("w2", "p"), Some(TruthValue::Gap));
        assert_eq!(m.value("w0", "zzz"), Some(TruthValue::Gap));
        assert_eq!(m.value("nope", "p"), None);
    }

    #[test]
    fn setting_gap_clears_the_entry() {
        let mut m = sample();
        m.set_atom("w0", "p", TruthValue::Gap).unwrap();
        assert!(m.world_atoms("w0").unwrap().is_empty());
    }

    #[test]
    fn successors_are_sorted_and_scoped() {
        let m = sample();
        let succ: Vec<&str> = m.successors("w0").collect();
        assert_eq!(succ, vec!["w1", "w2"]);
        assert_eq!(m.successors("w1").count(), 0);
    }

    #[test]
    fn id_validation() {
        let mut m = KripkeModel::new("t");
        assert!(m.add_world("0w").is_err());
        assert!(m.add_world("w w").is_err());
        assert!(m.add_world("w0@1").is_ok());
        assert!(m.add_world("_x").is_ok());
        m.add_world("w").unwrap();
        assert!(m.set_atom("w", "P", TruthValue::True).is_err());
        assert!(m.set_atom("w", "p1_x", TruthValue::True).is_ok());
        assert!(m.add_edge("w", "ghost").is_err());
        assert_eq!(
            m.add_world("w"),
            Err(ModelError::DuplicateWorld("w".to_string()))
        );
    }

    #[test]
    fn save_load_round_trip() {
        let m = sample();
        let text = save_model(&m);
        let back = load_model(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn loads_the_documented_format() {
        let text = "\
# two worlds, one edge
model demo
world w0 { p=T q=F }
world w1 { }
edge w0 w1 # hearer's alternative
";
        let m = load_model(text).unwrap();
        assert_eq!(m.name(), "demo");
        assert_eq!(m.value("w0", "q"), Some(TruthValue::False));
        assert_eq!(m.value("w1", "p"), Some(TruthValue::Gap));
        assert!(m.has_edge("w0", "w1"));
    }

    #[test]
    fn edges_may_precede_worlds() {
        let text = "model demo\nedge w0 w1\nworld w0 { }\nworld w1 { }\n";
        let m = load_model(text).unwrap();
        assert!(m.has_edge("w0", "w1"));
    }

    #[test]
    fn load_errors_carry_line_numbers() {
        let bad = "model demo\nworld w0 { p=X }\n";
        match load_model(bad) {
            Err(ModelError::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("`T` or `F`"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match load_model("world w0 { }\n") {
            Err(ModelError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        match load_model("model demo\nedge w0 w1\nworld w0 { }\n") {
            Err(ModelError::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("unknown world"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn dot_output_shape() {
        let dot = to_dot(&sample(), Some("w0"));
        assert!(dot.starts_with("digraph \"m1\" {"));
        assert!(dot.contains("\"w0\" [label=\"w0\\np\", peripheries=2];"));
        assert!(dot.contains("\"w1\" [label=\"w1\\n¬p\"];"));
        assert!(dot.contains("\"w2\" [label=\"w2\"];"));
        assert!(dot.contains("\"w0\" -> \"w1\";"));
        assert!(dot.ends_with("}\n"));
    }

    #[test]
    fn pointed_model_checks_the_point() {
        let m = sample();
        assert!(PointedModel::new(m.clone(), "w0").is_ok());
        assert!(PointedModel::new(m, "w9").is_err());
    }
}
