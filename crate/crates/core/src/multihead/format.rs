//! JSON machine files and Graphviz export.
//!
//! States are referred to by name. In `reads`, `$` is the end-marker, `?`
//! matches anything, and the literal symbols `$`, `?` and `\` are written
//! with a leading backslash.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{HeadRead, MultiheadMachine, Provenance, Transition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("malformed machine file at {location}: {message}")]
    Malformed { location: String, message: String },
}

fn malformed(location: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Malformed {
        location: location.into(),
        message: message.into(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MachineFile {
    name: String,
    heads: usize,
    sensing: bool,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: String,
    accepting: Vec<String>,
    transitions: Vec<TransitionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<ProvenanceFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionFile {
    from: String,
    reads: Vec<String>,
    #[serde(default)]
    eq: Vec<(usize, usize)>,
    #[serde(default)]
    neq: Vec<(usize, usize)>,
    to: String,
    advance: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceFile {
    source: String,
    variant: String,
}

fn read_to_text(read: HeadRead) -> String {
    match read {
        HeadRead::End => "$".into(),
        HeadRead::Any => "?".into(),
        HeadRead::Symbol(c @ ('$' | '?' | '\\')) => format!("\\{c}"),
        HeadRead::Symbol(c) => c.to_string(),
    }
}

fn read_from_text(text: &str) -> Option<HeadRead> {
    let mut chars = text.chars();
    let read = match (chars.next()?, chars.next()) {
        ('$', None) => HeadRead::End,
        ('?', None) => HeadRead::Any,
        ('\\', Some(c @ ('$' | '?' | '\\'))) => HeadRead::Symbol(c),
        ('\\', _) => return None,
        (c, None) => HeadRead::Symbol(c),
        _ => return None,
    };
    chars.next().is_none().then_some(read)
}

/// Serialise a machine to its canonical JSON text.
pub fn export_machine(machine: &MultiheadMachine) -> String {
    let name = |s: usize| machine.states[s].clone();
    let file = MachineFile {
        name: machine.name.clone(),
        heads: machine.heads,
        sensing: machine.sensing,
        alphabet: machine.alphabet.iter().map(char::to_string).collect(),
        states: machine.states.clone(),
        initial: name(machine.initial),
        accepting: machine.accepting.iter().map(|&s| name(s)).collect(),
        transitions: machine
            .transitions
            .iter()
            .map(|t| TransitionFile {
                from: name(t.from),
                reads: t.reads.iter().copied().map(read_to_text).collect(),
                eq: t.eq.clone(),
                neq: t.neq.clone(),
                to: name(t.to),
                advance: t.advance.clone(),
            })
            .collect(),
        provenance: machine.provenance.as_ref().map(|p| ProvenanceFile {
            source: p.source.clone(),
            variant: p.variant.clone(),
        }),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("machine serialises");
    text.push('\n');
    text
}

/// Parse and validate a machine file.
pub fn import_machine(text: &str) -> Result<MultiheadMachine, FormatError> {
    let file: MachineFile = serde_json::from_str(text).map_err(|e| {
        malformed(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;

    let mut index = HashMap::new();
    for (i, s) in file.states.iter().enumerate() {
        if index.insert(s.as_str(), i).is_some() {
            return Err(malformed(format!("states[{i}]"), format!("duplicate state {s:?}")));
        }
    }
    let lookup = |name: &str, location: String| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| malformed(location, format!("unknown state {name:?}")))
    };

    let mut alphabet = BTreeSet::new();
    for (i, s) in file.alphabet.iter().enumerate() {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => {
                alphabet.insert(c);
            }
            _ => return Err(malformed(format!("alphabet[{i}]"), "expected a single symbol")),
        }
    }

    let initial = lookup(&file.initial, "initial".into())?;
    let accepting = file
        .accepting
        .iter()
        .enumerate()
        .map(|(i, s)| lookup(s, format!("accepting[{i}]")))
        .collect::<Result<BTreeSet<_>, _>>()?;

    let mut transitions = Vec::with_capacity(file.transitions.len());
    for (t, rule) in file.transitions.iter().enumerate() {
        let reads = rule
            .reads
            .iter()
            .enumerate()
            .map(|(h, r)| {
                read_from_text(r).ok_or_else(|| {
                    malformed(format!("transitions[{t}].reads[{h}]"), format!("bad read {r:?}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        transitions.push(Transition {
            from: lookup(&rule.from, format!("transitions[{t}].from"))?,
            reads,
            eq: rule.eq.clone(),
            neq: rule.neq.clone(),
            to: lookup(&rule.to, format!("transitions[{t}].to"))?,
            advance: rule.advance.clone(),
        });
    }

    let machine = MultiheadMachine {
        name: file.name,
        heads: file.heads,
        sensing: file.sensing,
        alphabet,
        states: file.states,
        initial,
        accepting,
        transitions,
        provenance: file.provenance.map(|p| Provenance {
            source: p.source,
            variant: p.variant,
        }),
    };
    machine.validate().map_err(|violations| {
        let first = &violations[0];
        malformed("machine", first.to_string())
    })?;
    Ok(machine)
}

/// Graphviz rendering, one edge per transition.
pub fn to_dot(machine: &MultiheadMachine) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {:?} {{", machine.name);
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  __start [shape=point];");
    for (i, s) in machine.states.iter().enumerate() {
        let shape = if machine.accepting.contains(&i) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  s{i} [label={s:?}, shape={shape}];");
    }
    let _ = writeln!(out, "  __start -> s{};", machine.initial);
    for t in &machine.transitions {
        let mut label = t
            .reads
            .iter()
            .map(|&r| read_to_text(r))
            .collect::<Vec<_>>()
            .join(",");
        for (i, j) in &t.eq {
            let _ = write!(label, " h{i}=h{j}");
        }
        for (i, j) in &t.neq {
            let _ = write!(label, " h{i}!=h{j}");
        }
        let moved: Vec<String> = t
            .advance
            .iter()
            .enumerate()
            .filter(|(_, &a)| a == 1)
            .map(|(h, _)| format!("h{h}"))
            .collect();
        if !moved.is_empty() {
            let _ = write!(label, " / {}", moved.join(","));
        }
        let _ = writeln!(out, "  s{} -> s{} [label={label:?}];", t.from, t.to);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MultiheadMachine {
        MultiheadMachine {
            name: "odd".into(),
            heads: 2,
            sensing: true,
            alphabet: BTreeSet::from(['$', 'a']),
            states: vec!["p".into(), "q".into()],
            initial: 0,
            accepting: BTreeSet::from([1]),
            transitions: vec![Transition {
                from: 0,
                reads: vec![HeadRead::Symbol('$'), HeadRead::End],
                eq: vec![(0, 1)],
                neq: vec![],
                to: 1,
                advance: vec![1, 0],
            }],
            provenance: Some(Provenance {
                source: "x".into(),
                variant: "sensing".into(),
            }),
        }
    }

    #[test]
    fn round_trip() {
        let m = sample();
        let text = export_machine(&m);
        assert!(text.contains(r#""\\$""#));
        assert_eq!(import_machine(&text).unwrap(), m);
        assert_eq!(export_machine(&import_machine(&text).unwrap()), text);
    }

    #[test]
    fn field_order() {
        let text = export_machine(&sample());
        let keys = ["\"name\"", "\"heads\"", "\"sensing\"", "\"alphabet\"", "\"states\"", "\"initial\"", "\"accepting\"", "\"transitions\""];
        let offsets: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(offsets.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn malformed_inputs() {
        let err = import_machine("{\n  \"name\": 3").unwrap_err();
        let FormatError::Malformed { location, .. } = err;
        assert!(location.starts_with("line 2"));

        let text = export_machine(&sample()).replace("\"to\": \"q\"", "\"to\": \"zz\"");
        let FormatError::Malformed { location, .. } = import_machine(&text).unwrap_err();
        assert_eq!(location, "transitions[0].to");

        let text = export_machine(&sample()).replace("\"advance\": [\n        1", "\"advance\": [\n        2");
        assert!(import_machine(&text).is_err());
    }

    #[test]
    fn dot_output() {
        let dot = to_dot(&sample());
        assert!(dot.starts_with("digraph \"odd\""));
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("h0=h1"));
    }
}
