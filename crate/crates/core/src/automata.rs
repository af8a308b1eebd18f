//! Timed Büchi automata: data model, text format, and symbolic successors.
//!
//! Automaton clock `c` lives at DBM index `c + 1`; indices past the automaton
//! clocks belong to the caller (the monitor's `time` and `etime`, say) and are
//! never reset by transitions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::bound::Bound;
use crate::dbm::{Clock, Constraint, Dbm};
use crate::error::Error;

pub type LocationId = usize;
pub type SymbolId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    fn as_str(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "==",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

/// `x ∼ n` over an automaton clock.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AtomicConstraint {
    pub clock: usize,
    pub relation: Relation,
    pub constant: i64,
}

impl AtomicConstraint {
    pub fn new(clock: usize, relation: Relation, constant: i64) -> AtomicConstraint {
        AtomicConstraint { clock, relation, constant }
    }

    /// The DBM constraints this atom stands for.
    pub fn to_dbm(&self) -> [Option<Constraint>; 2] {
        let x = self.clock + 1;
        let n = self.constant;
        match self.relation {
            Relation::Lt => [Some(Constraint::upper(x, Bound::lt(n))), None],
            Relation::Le => [Some(Constraint::upper(x, Bound::le(n))), None],
            Relation::Eq => {
                [Some(Constraint::upper(x, Bound::le(n))), Some(Constraint::lower(x, n, false))]
            }
            Relation::Ge => [Some(Constraint::lower(x, n, false)), None],
            Relation::Gt => [Some(Constraint::lower(x, n, true)), None],
        }
    }

    pub fn holds(&self, value: i64) -> bool {
        match self.relation {
            Relation::Lt => value < self.constant,
            Relation::Le => value <= self.constant,
            Relation::Eq => value == self.constant,
            Relation::Ge => value >= self.constant,
            Relation::Gt => value > self.constant,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub src: LocationId,
    pub dst: LocationId,
    pub label: SymbolId,
    pub resets: Vec<usize>,
    pub guard: Vec<AtomicConstraint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Input,
    Output,
}

/// A timed Büchi automaton `(Σ, Q, Q₀, C, Δ, F)` with an optional split of
/// the alphabet into inputs and outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tba {
    alphabet: Vec<String>,
    locations: Vec<String>,
    initial: Vec<LocationId>,
    clocks: Vec<String>,
    transitions: Vec<Transition>,
    accepting: Vec<bool>,
    directions: Option<Vec<Direction>>,
    outgoing: Vec<Vec<usize>>,
    active: Vec<Vec<bool>>,
}

/// A location together with a zone over the automaton clocks and any
/// auxiliary clocks the caller appends.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicState {
    pub location: LocationId,
    pub zone: Dbm,
}

/// Programmatic construction by name.
#[derive(Clone, Debug, Default)]
pub struct TbaBuilder {
    alphabet: Vec<String>,
    locations: Vec<String>,
    initial: Vec<String>,
    accepting: Vec<String>,
    clocks: Vec<String>,
    inputs: Option<Vec<String>>,
    outputs: Option<Vec<String>>,
    edges: Vec<(String, String, String, Vec<(String, Relation, i64)>, Vec<String>)>,
}

impl TbaBuilder {
    pub fn new() -> TbaBuilder {
        TbaBuilder::default()
    }

    pub fn alphabet(mut self, symbols: &[&str]) -> Self {
        self.alphabet = symbols.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn clocks(mut self, clocks: &[&str]) -> Self {
        self.clocks = clocks.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn inputs(mut self, symbols: &[&str]) -> Self {
        self.inputs = Some(symbols.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn outputs(mut self, symbols: &[&str]) -> Self {
        self.outputs = Some(symbols.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn location(mut self, name: &str, initial: bool, accepting: bool) -> Self {
        self.locations.push(name.to_string());
        if initial {
            self.initial.push(name.to_string());
        }
        if accepting {
            self.accepting.push(name.to_string());
        }
        self
    }

    pub fn edge(
        mut self,
        src: &str,
        dst: &str,
        label: &str,
        guard: &[(&str, Relation, i64)],
        resets: &[&str],
    ) -> Self {
        self.edges.push((
            src.to_string(),
            dst.to_string(),
            label.to_string(),
            guard.iter().map(|(c, r, n)| (c.to_string(), *r, *n)).collect(),
            resets.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<Tba, Error> {
        let mut errors = Vec::new();
        let index = |names: &[String], n: &str| names.iter().position(|m| m == n);
        let mut check_dups = |kind: &str, names: &[String]| {
            for (k, n) in names.iter().enumerate() {
                if names[..k].contains(n) {
                    errors.push(format!("duplicate {kind} `{n}`"));
                }
            }
        };
        check_dups("symbol", &self.alphabet);
        check_dups("location", &self.locations);
        check_dups("clock", &self.clocks);
        if self.locations.is_empty() {
            errors.push("no locations declared".into());
        }
        if self.initial.is_empty() {
            errors.push("no initial location".into());
        }
        let mut accepting = alloc::vec![false; self.locations.len()];
        for a in &self.accepting {
            if let Some(k) = index(&self.locations, a) {
                accepting[k] = true;
            }
        }
        let initial: Vec<LocationId> =
            self.initial.iter().filter_map(|n| index(&self.locations, n)).collect();

        let directions = match (&self.inputs, &self.outputs) {
            (None, None) => None,
            (ins, outs) => {
                let ins = ins.clone().unwrap_or_default();
                let outs = outs.clone().unwrap_or_default();
                let mut dirs = Vec::with_capacity(self.alphabet.len());
                for s in ins.iter().chain(&outs) {
                    if index(&self.alphabet, s).is_none() {
                        errors.push(format!("partition names unknown symbol `{s}`"));
                    }
                }
                for s in &self.alphabet {
                    match (ins.contains(s), outs.contains(s)) {
                        (true, false) => dirs.push(Direction::Input),
                        (false, true) => dirs.push(Direction::Output),
                        (true, true) => {
                            errors.push(format!("symbol `{s}` is both input and output"));
                            dirs.push(Direction::Input);
                        }
                        (false, false) => {
                            errors.push(format!("symbol `{s}` is neither input nor output"));
                            dirs.push(Direction::Input);
                        }
                    }
                }
                Some(dirs)
            }
        };

        let mut transitions = Vec::new();
        for (src, dst, label, guard, resets) in &self.edges {
            let s = index(&self.locations, src);
            let d = index(&self.locations, dst);
            let l = index(&self.alphabet, label);
            if s.is_none() {
                errors.push(format!("edge from unknown location `{src}`"));
            }
            if d.is_none() {
                errors.push(format!("edge to unknown location `{dst}`"));
            }
            if l.is_none() {
                errors.push(format!("edge labelled with unknown symbol `{label}`"));
            }
            let mut g = Vec::new();
            for (c, r, n) in guard {
                match index(&self.clocks, c) {
                    Some(k) if *n >= 0 => g.push(AtomicConstraint::new(k, *r, *n)),
                    Some(_) => errors.push(format!("negative constant in guard on `{c}`")),
                    None => errors.push(format!("guard on unknown clock `{c}`")),
                }
            }
            let mut rs = Vec::new();
            for c in resets {
                match index(&self.clocks, c) {
                    Some(k) if !rs.contains(&k) => rs.push(k),
                    Some(_) => {}
                    None => errors.push(format!("reset of unknown clock `{c}`")),
                }
            }
            if let (Some(src), Some(dst), Some(label)) = (s, d, l) {
                transitions.push(Transition { src, dst, label, resets: rs, guard: g });
            }
        }
        if !errors.is_empty() {
            return Err(Error::Semantic(errors));
        }
        Ok(Tba::assemble(
            self.alphabet,
            self.locations,
            initial,
            self.clocks,
            transitions,
            accepting,
            directions,
        ))
    }
}

impl Tba {
    fn assemble(
        alphabet: Vec<String>,
        locations: Vec<String>,
        initial: Vec<LocationId>,
        clocks: Vec<String>,
        transitions: Vec<Transition>,
        accepting: Vec<bool>,
        directions: Option<Vec<Direction>>,
    ) -> Tba {
        let mut outgoing = alloc::vec![Vec::new(); locations.len()];
        for (k, t) in transitions.iter().enumerate() {
            outgoing[t.src].push(k);
        }
        let active = active_clocks(locations.len(), clocks.len(), &transitions);
        Tba { alphabet, locations, initial, clocks, transitions, accepting, directions, outgoing, active }
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn locations(&self) -> &[String] {
        &self.locations
    }

    pub fn initial(&self) -> &[LocationId] {
        &self.initial
    }

    pub fn clocks(&self) -> &[String] {
        &self.clocks
    }

    pub fn clock_count(&self) -> usize {
        self.clocks.len()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn outgoing(&self, q: LocationId) -> impl Iterator<Item = &Transition> {
        self.outgoing[q].iter().map(move |&k| &self.transitions[k])
    }

    pub fn is_accepting(&self, q: LocationId) -> bool {
        self.accepting[q]
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn location(&self, name: &str) -> Option<LocationId> {
        self.locations.iter().position(|s| s == name)
    }

    pub fn direction(&self, a: SymbolId) -> Option<Direction> {
        self.directions.as_ref().map(|d| d[a])
    }

    pub fn has_partition(&self) -> bool {
        self.directions.is_some()
    }

    /// Whether clock `c` may be read by a guard before it is next reset,
    /// starting in `q`.
    pub fn is_active(&self, q: LocationId, c: usize) -> bool {
        self.active[q][c]
    }

    /// Frees every automaton clock that is inactive in the state's location.
    /// Languages from the state do not depend on such clocks.
    pub fn free_inactive(&self, mut s: SymbolicState) -> SymbolicState {
        for c in 0..self.clocks.len() {
            if !self.active[s.location][c] {
                s.zone = s.zone.free(c + 1).expect("automaton clocks are never the reference clock");
            }
        }
        s
    }

    /// Same structure with another accepting set.
    pub fn with_accepting(&self, accepting: &[LocationId]) -> Tba {
        let mut t = self.clone();
        t.accepting = alloc::vec![false; t.locations.len()];
        for &q in accepting {
            t.accepting[q] = true;
        }
        t
    }

    /// Largest constant compared against each automaton clock, `-1` if none.
    pub fn max_constants(&self) -> Vec<i64> {
        let mut m = alloc::vec![-1; self.clocks.len()];
        for t in &self.transitions {
            for g in &t.guard {
                m[g.clock] = m[g.clock].max(g.constant);
            }
        }
        m
    }

    /// Parses the line-oriented text format; decimal constants are multiplied
    /// by `scale` and must come out integral.
    pub fn parse(text: &str, scale: i64) -> Result<Tba, Error> {
        let mut b = TbaBuilder::new();
        let mut saw_alphabet = false;
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("");
            let indent = line.len() - line.trim_start().len();
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |col: usize, message: String| Error::Syntax {
                line: line_no,
                column: indent + col + 1,
                message,
            };
            let (keyword, rest) = match line.find(char::is_whitespace) {
                Some(p) => (&line[..p], line[p..].trim_start()),
                None => (line, ""),
            };
            let rest_col = line.len() - rest.len();
            let words: Vec<&str> = rest.split_whitespace().collect();
            match keyword {
                "alphabet" => {
                    saw_alphabet = true;
                    b.alphabet.extend(words.iter().map(|s| s.to_string()));
                }
                "inputs" => {
                    b.inputs.get_or_insert_with(Vec::new).extend(words.iter().map(|s| s.to_string()))
                }
                "outputs" => b
                    .outputs
                    .get_or_insert_with(Vec::new)
                    .extend(words.iter().map(|s| s.to_string())),
                "clocks" => b.clocks.extend(words.iter().map(|s| s.to_string())),
                "location" => {
                    let Some(name) = words.first() else {
                        return Err(syntax(rest_col, "location needs a name".into()));
                    };
                    let mut initial = false;
                    let mut accepting = false;
                    for w in &words[1..] {
                        match *w {
                            "initial" => initial = true,
                            "accepting" => accepting = true,
                            other => {
                                let col = rest_col + rest.find(other).unwrap_or(0);
                                return Err(syntax(col, format!("unknown location flag `{other}`")));
                            }
                        }
                    }
                    b = b.location(name, initial, accepting);
                }
                "edge" => {
                    let edge = parse_edge(rest, scale).map_err(|(col, msg)| syntax(rest_col + col, msg))?;
                    b.edges.push(edge);
                }
                other => return Err(syntax(0, format!("unknown declaration `{other}`"))),
            }
        }
        if !saw_alphabet {
            return Err(Error::Semantic(alloc::vec!["no alphabet declared".into()]));
        }
        b.build()
    }

    /// Writes the text format back; constants are divided by `scale`.
    pub fn to_text(&self, scale: i64) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "alphabet {}", self.alphabet.join(" "));
        if let Some(dirs) = &self.directions {
            let pick = |d: Direction| -> Vec<&str> {
                self.alphabet
                    .iter()
                    .zip(dirs)
                    .filter(|(_, x)| **x == d)
                    .map(|(s, _)| s.as_str())
                    .collect()
            };
            let _ = writeln!(out, "inputs {}", pick(Direction::Input).join(" "));
            let _ = writeln!(out, "outputs {}", pick(Direction::Output).join(" "));
        }
        if !self.clocks.is_empty() {
            let _ = writeln!(out, "clocks {}", self.clocks.join(" "));
        }
        for (q, name) in self.locations.iter().enumerate() {
            out.push_str("location ");
            out.push_str(name);
            if self.initial.contains(&q) {
                out.push_str(" initial");
            }
            if self.accepting[q] {
                out.push_str(" accepting");
            }
            out.push('\n');
        }
        for t in &self.transitions {
            let _ = write!(
                out,
                "edge {} -> {} on {}",
                self.locations[t.src], self.locations[t.dst], self.alphabet[t.label]
            );
            if !t.guard.is_empty() {
                let atoms: Vec<String> = t
                    .guard
                    .iter()
                    .map(|g| {
                        format!(
                            "{}{}{}",
                            self.clocks[g.clock],
                            g.relation.as_str(),
                            format_scaled(g.constant, scale)
                        )
                    })
                    .collect();
                let _ = write!(out, " when {}", atoms.join(" && "));
            }
            if !t.resets.is_empty() {
                let names: Vec<&str> = t.resets.iter().map(|&c| self.clocks[c].as_str()).collect();
                let _ = write!(out, " reset {}", names.join(" "));
            }
            out.push('\n');
        }
        out
    }

    /// DBM dimension needed for the automaton clocks plus `aux` extra clocks.
    pub fn dim_with(&self, aux: usize) -> usize {
        1 + self.clocks.len() + aux
    }

    /// `Post((q, Z), a)`: one successor per enabled `a`-edge, empty zones dropped.
    pub fn post(&self, s: &SymbolicState, a: SymbolId) -> Vec<SymbolicState> {
        let mut out = Vec::new();
        if s.zone.is_empty() {
            return out;
        }
        let up = s.zone.clone().up();
        for t in self.outgoing(s.location).filter(|t| t.label == a) {
            if let Some(z) = self.fire(&up, t) {
                out.push(SymbolicState { location: t.dst, zone: z });
            }
        }
        out
    }

    /// Guard then reset, without letting time pass first.
    pub fn fire(&self, zone: &Dbm, t: &Transition) -> Option<Dbm> {
        let mut z = zone.clone();
        for g in &t.guard {
            for c in g.to_dbm().into_iter().flatten() {
                z = z.constrain(c);
            }
        }
        if z.is_empty() {
            return None;
        }
        let resets: Vec<Clock> = t.resets.iter().map(|c| c + 1).collect();
        Some(z.reset(&resets).expect("automaton clocks are never the reference clock"))
    }

    /// `Succ(S, (a, τ))`: successors pinned to `time = τ`, inclusion-pruned.
    pub fn succ(&self, states: &[SymbolicState], a: SymbolId, tau: i64, time: Clock) -> Vec<SymbolicState> {
        let pin = [Constraint::upper(time, Bound::le(tau)), Constraint::lower(time, tau, false)];
        let mut out = Vec::new();
        for s in states {
            for mut n in self.post(s, a) {
                n.zone = n.zone.intersect(&pin);
                if !n.zone.is_empty() {
                    insert_pruned(&mut out, n);
                }
            }
        }
        out
    }

    /// The product with the two-phase automaton of input/output-alternating
    /// words starting with an input.
    pub fn io_alternation_product(&self) -> Result<Tba, Error> {
        let dirs = self.directions.as_ref().ok_or(Error::MissingPartition)?;
        let n = self.locations.len();
        // Location (q, expect-input) is 2q, (q, expect-output) is 2q + 1.
        let mut locations = Vec::with_capacity(2 * n);
        for q in &self.locations {
            locations.push(format!("{q}|in"));
            locations.push(format!("{q}|out"));
        }
        let initial = self.initial.iter().map(|q| 2 * q).collect();
        let mut accepting = Vec::with_capacity(2 * n);
        for q in 0..n {
            accepting.push(self.accepting[q]);
            accepting.push(self.accepting[q]);
        }
        let mut transitions = Vec::new();
        for t in &self.transitions {
            let (from, to) = match dirs[t.label] {
                Direction::Input => (2 * t.src, 2 * t.dst + 1),
                Direction::Output => (2 * t.src + 1, 2 * t.dst),
            };
            transitions.push(Transition { src: from, dst: to, ..t.clone() });
        }
        Ok(Tba::assemble(
            self.alphabet.clone(),
            locations,
            initial,
            self.clocks.clone(),
            transitions,
            accepting,
            self.directions.clone(),
        ))
    }

    /// Whether both automata share one alphabet, in any order.
    pub fn same_alphabet(&self, other: &Tba) -> bool {
        self.alphabet.len() == other.alphabet.len()
            && self.alphabet.iter().all(|s| other.symbol(s).is_some())
    }
}

/// Least fixpoint of: `c` is active in `q` if some edge out of `q` reads it,
/// or does not reset it and leads to a location where it is active.
fn active_clocks(n: usize, k: usize, transitions: &[Transition]) -> Vec<Vec<bool>> {
    let mut active = alloc::vec![alloc::vec![false; k]; n];
    for t in transitions {
        for g in &t.guard {
            active[t.src][g.clock] = true;
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for t in transitions {
            for c in 0..k {
                if !active[t.src][c] && active[t.dst][c] && !t.resets.contains(&c) {
                    active[t.src][c] = true;
                    changed = true;
                }
            }
        }
    }
    active
}

/// Adds `s` unless a stored zone at the same location already includes it;
/// drops stored zones that `s` includes.
pub fn insert_pruned(states: &mut Vec<SymbolicState>, s: SymbolicState) {
    if states.iter().any(|o| o.location == s.location && o.zone.includes(&s.zone)) {
        return;
    }
    states.retain(|o| !(o.location == s.location && s.zone.includes(&o.zone)));
    states.push(s);
}

type ParsedEdge = (String, String, String, Vec<(String, Relation, i64)>, Vec<String>);

fn parse_edge(rest: &str, scale: i64) -> Result<ParsedEdge, (usize, String)> {
    let col_of = |s: &str| s.as_ptr() as usize - rest.as_ptr() as usize;
    let mut tokens = rest.split_whitespace();
    let src = tokens.next().ok_or((0, String::from("edge needs a source")))?;
    let arrow = tokens.next().ok_or((rest.len(), String::from("expected `->`")))?;
    if arrow != "->" {
        return Err((col_of(arrow), format!("expected `->`, found `{arrow}`")));
    }
    let dst = tokens.next().ok_or((rest.len(), String::from("edge needs a target")))?;
    let on = tokens.next().ok_or((rest.len(), String::from("expected `on`")))?;
    if on != "on" {
        return Err((col_of(on), format!("expected `on`, found `{on}`")));
    }
    let label = tokens.next().ok_or((rest.len(), String::from("edge needs a symbol")))?;

    let after_label = col_of(label) + label.len();
    let tail = &rest[after_label..];
    let (when_part, reset_part) = match find_word(tail, "reset") {
        Some(p) => (&tail[..p], Some(&tail[p + "reset".len()..])),
        None => (tail, None),
    };
    let mut guard = Vec::new();
    let when_trim = when_part.trim();
    if !when_trim.is_empty() {
        let Some(body) = when_trim.strip_prefix("when") else {
            return Err((col_of(when_trim), format!("expected `when` or `reset`, found `{when_trim}`")));
        };
        for atom in body.split("&&") {
            let atom_t = atom.trim();
            if atom_t.is_empty() {
                return Err((col_of(atom), String::from("empty guard conjunct")));
            }
            guard.push(parse_atom(atom_t, scale).map_err(|m| (col_of(atom_t), m))?);
        }
    }
    let mut resets = Vec::new();
    if let Some(r) = reset_part {
        let names: Vec<&str> = r.split_whitespace().collect();
        if names.is_empty() {
            return Err((col_of(r), String::from("`reset` needs at least one clock")));
        }
        resets.extend(names.iter().map(|s| s.to_string()));
    }
    Ok((src.to_string(), dst.to_string(), label.to_string(), guard, resets))
}

fn find_word(hay: &str, word: &str) -> Option<usize> {
    let mut from = 0;
    while let Some(p) = hay[from..].find(word) {
        let at = from + p;
        let before_ok = at == 0 || hay[..at].ends_with(char::is_whitespace);
        let after = &hay[at + word.len()..];
        let after_ok = after.is_empty() || after.starts_with(char::is_whitespace);
        if before_ok && after_ok {
            return Some(at);
        }
        from = at + word.len();
    }
    None
}

fn parse_atom(atom: &str, scale: i64) -> Result<(String, Relation, i64), String> {
    let ops: [(&str, Relation); 7] = [
        ("<=", Relation::Le),
        (">=", Relation::Ge),
        ("==", Relation::Eq),
        ("<", Relation::Lt),
        (">", Relation::Gt),
        ("=", Relation::Eq),
        ("≤", Relation::Le),
    ];
    for (op, rel) in ops {
        if let Some(p) = atom.find(op) {
            let clock = atom[..p].trim();
            let value = atom[p + op.len()..].trim();
            if clock.is_empty() || clock.contains(char::is_whitespace) {
                return Err(format!("bad clock name in `{atom}`"));
            }
            let n = parse_scaled(value, scale)
                .ok_or_else(|| format!("`{value}` is not a non-negative constant at scale {scale}"))?;
            return Ok((clock.to_string(), rel, n));
        }
    }
    Err(format!("no comparison operator in `{atom}`"))
}

/// Parses a non-negative decimal and multiplies it by `scale`; `None` if
/// malformed or if a fractional residue would remain.
pub fn parse_scaled(text: &str, scale: i64) -> Option<i64> {
    if scale <= 0 || text.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|c| c.is_ascii_digit()) || !frac_part.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let int: i64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
    let mut value = int.checked_mul(scale)?;
    let mut place = scale;
    for c in frac_part.bytes() {
        let digit = i64::from(c - b'0');
        if place % 10 != 0 {
            if digit != 0 {
                return None;
            }
            continue;
        }
        place /= 10;
        value = value.checked_add(digit * place)?;
    }
    Some(value)
}

/// Inverse of [`parse_scaled`] for display; exact when `scale` is a power of ten.
pub fn format_scaled(value: i64, scale: i64) -> String {
    if scale == 1 {
        return value.to_string();
    }
    let sign = if value < 0 { "-" } else { "" };
    let v = value.unsigned_abs();
    let s = scale as u64;
    let int = v / s;
    let frac = v % s;
    if frac == 0 {
        return format!("{sign}{int}");
    }
    let digits = {
        let mut d = 0;
        let mut p = 1u64;
        while p < s {
            p *= 10;
            d += 1;
        }
        d
    };
    let mut f = format!("{frac:0digits$}");
    while f.ends_with('0') {
        f.pop();
    }
    format!("{sign}{int}.{f}")
}
