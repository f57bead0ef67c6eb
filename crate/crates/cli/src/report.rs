use alcove_core::compat::{Verdict, Witness};
use alcove_core::geom::fmt_q;
use alcove_core::osp::InterlacingKind;
use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// What a command prints and how it exits. `json` holds one document, or
/// one document per line when `lines` is set.
pub struct Output {
    pub json: Vec<Value>,
    pub text: Vec<String>,
    pub code: u8,
}

impl Output {
    pub fn single(json: Value, text: String, code: u8) -> Self {
        Self {
            json: vec![json],
            text: vec![text],
            code,
        }
    }

    pub fn print(&self, format: Format) {
        match format {
            Format::Json => {
                for v in &self.json {
                    println!("{v}");
                }
            }
            Format::Text => {
                for t in &self.text {
                    println!("{t}");
                }
            }
        }
    }
}

pub fn code_of(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

pub fn join_ints<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Interlacing(i) => {
            let kind = match i.kind {
                InterlacingKind::Four => "4-interlacing",
                InterlacingKind::SixFirstKind => "6-interlacing (first kind)",
                InterlacingKind::SixSecondKind => "6-interlacing (second kind)",
            };
            format!("{kind} on ({})", join_ints(&i.elements))
        }
        Witness::Cycle(c) => format!("violating cycle {}", cycle_text(c)),
        Witness::Cones(o) => {
            let arc =
                |a: Option<(usize, usize)>| a.map_or("-".to_string(), |(x, y)| format!("{x}>{y}"));
            format!(
                "cones without {} / {} meet in a non-root cone, cycle {}",
                arc(o.upper_omitted),
                arc(o.lower_omitted),
                cycle_text(&o.cycle)
            )
        }
        Witness::Facet(f) => {
            let normal: Vec<String> = f.normal.iter().map(ToString::to_string).collect();
            let rel = match f.sense {
                alcove_core::geom::Sense::AtLeast => ">=",
                alcove_core::geom::Sense::AtMost => "<=",
            };
            format!(
                "non-root facet normal ({}) {rel} {}",
                normal.join(","),
                fmt_q(&f.offset)
            )
        }
    }
}

fn cycle_text(c: &alcove_core::pdgraph::CycleWitness) -> String {
    c.edges
        .iter()
        .map(|e| format!("{}-{}:{}", e.from, e.to, e.layer))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn verdict_text(v: &Verdict) -> String {
    let method = serde_json::to_value(v.method).ok();
    let method = method.as_ref().and_then(Value::as_str).unwrap_or("?");
    let mut out = if v.compatible {
        format!("compatible ({method})")
    } else {
        format!("incompatible ({method})")
    };
    if let Some(w) = &v.witness {
        out.push_str(": ");
        out.push_str(&witness_text(w));
    }
    if let Some(r) = &v.restriction {
        out.push_str(&format!(" on restriction {{{}}}", join_ints(r)));
    }
    if let Some((i, j)) = v.pair {
        out.push_str(&format!(" [pair {i},{j}]"));
    }
    out
}
