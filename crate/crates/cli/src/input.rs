//! Input sources and the invariants computed from them.

use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;
use tielink::braid::{TiePartition, TiedBraidWord};
use tielink::diagram::{PdFile, TiedDiagram};
use tielink::skein::{self, SkeinContext, SkeinMemo};
use tielink::tbmw::{self, TraceEngine, TraceMemo};
use tielink::{Poly, VarSet};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Invariant {
    #[value(name = "L")]
    #[serde(rename = "L")]
    L,
    #[value(name = "Lhat")]
    #[serde(rename = "Lhat")]
    LHat,
    #[value(name = "bracket")]
    #[serde(rename = "bracket")]
    Bracket,
    #[value(name = "J")]
    #[serde(rename = "J")]
    J,
    /// `J` in `q = t^(1/4)`.
    #[value(name = "jones_t")]
    #[serde(rename = "jones_t")]
    JonesT,
    /// The classical Kauffman polynomial of the underlying link, ties ignored.
    #[value(name = "kauffman_classical")]
    #[serde(rename = "kauffman_classical")]
    KauffmanClassical,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::L => "L",
            Invariant::LHat => "Lhat",
            Invariant::Bracket => "bracket",
            Invariant::J => "J",
            Invariant::JonesT => "jones_t",
            Invariant::KauffmanClassical => "kauffman_classical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Skein,
    Trace,
}

#[derive(Debug, Clone)]
pub enum Input {
    Braid { word: TiedBraidWord, partition: Option<TiePartition> },
    Pd { path: PathBuf, diagram: TiedDiagram },
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub braid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strands: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pd: Option<String>,
}

impl Input {
    pub fn from_braid(text: &str, strands: usize, partition: Option<&str>) -> Result<Self, CliError> {
        let word = TiedBraidWord::parse(text, Some(strands)).map_err(|e| CliError::Parse(format!("braid: {e}")))?;
        let partition = match partition {
            None => None,
            Some(p) => {
                let count = word.component_count();
                Some(TiePartition::parse(p, Some(count)).map_err(|e| CliError::Parse(format!("partition: {e}")))?)
            }
        };
        Ok(Input::Braid { word, partition })
    }

    pub fn from_pd(path: PathBuf) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let pd = PdFile::from_json(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let diagram = TiedDiagram::from_pd(&pd).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Ok(Input::Pd { path, diagram })
    }

    /// `"N : word"`, optionally followed by `| partition`, or `pd:FILE`.
    pub fn from_spec(spec: &str) -> Result<Self, CliError> {
        if let Some(path) = spec.strip_prefix("pd:") {
            return Self::from_pd(PathBuf::from(path.trim()));
        }
        let (head, partition) = match spec.split_once('|') {
            Some((h, p)) => (h, Some(p.trim())),
            None => (spec, None),
        };
        let (n, word) = head
            .split_once(':')
            .ok_or_else(|| CliError::Parse(format!("`{spec}`: expected `strands : word` or `pd:FILE`")))?;
        let n: usize = n.trim().parse().map_err(|_| CliError::Parse(format!("`{spec}`: bad strand count")))?;
        Self::from_braid(word.trim(), n, partition)
    }

    pub fn echo(&self) -> InputEcho {
        match self {
            Input::Braid { word, partition } => InputEcho {
                braid: Some(word.to_string()),
                strands: Some(word.strands()),
                partition: partition.as_ref().map(|p| p.to_string()),
                pd: None,
            },
            Input::Pd { path, .. } => InputEcho { braid: None, strands: None, partition: None, pd: Some(path.display().to_string()) },
        }
    }

    pub fn diagram(&self) -> Result<TiedDiagram, CliError> {
        match self {
            Input::Braid { word, partition } => word.closure(partition.as_ref()).map_err(|e| CliError::Parse(e.to_string())),
            Input::Pd { diagram, .. } => Ok(diagram.clone()),
        }
    }

    /// The same input with every crossing switched.
    pub fn mirror(&self) -> Input {
        match self {
            Input::Braid { word, partition } => {
                let letters = word.letters().iter().map(|l| l.inverse()).collect();
                Input::Braid { word: TiedBraidWord::new(word.strands(), letters).expect("same indices"), partition: partition.clone() }
            }
            Input::Pd { path, diagram } => Input::Pd { path: path.clone(), diagram: diagram.mirror() },
        }
    }

    fn trace_word(&self) -> Result<&TiedBraidWord, CliError> {
        match self {
            Input::Braid { word, partition: None } => Ok(word),
            Input::Braid { .. } => Err(CliError::Usage("the trace route takes ties as e-letters of the braid word, not --partition".into())),
            Input::Pd { .. } => Err(CliError::Usage("the trace route needs a braid word, not a PD file".into())),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Stats {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skein_nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skein_cache_hits: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skein_memo_entries: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_memo_entries: Option<usize>,
}

/// Engines and memo tables shared by all computations of one command.
pub struct Session {
    skein: SkeinContext,
    tied: Option<TraceEngine>,
    classical: Option<TraceEngine>,
    trace_memo: TraceMemo,
    budget: u64,
}

impl Session {
    /// The rewrite step budget comes from `TIELINK_STEP_BUDGET` when set.
    pub fn new() -> Self {
        Session { skein: SkeinContext::new(), tied: None, classical: None, trace_memo: TraceMemo::default(), budget: tbmw::step_budget() }
    }

    fn tied(&mut self) -> &TraceEngine {
        let budget = self.budget;
        self.tied.get_or_insert_with(|| TraceEngine::tied().with_budget(budget))
    }

    fn classical(&mut self) -> &TraceEngine {
        let budget = self.budget;
        self.classical.get_or_insert_with(|| TraceEngine::classical().with_budget(budget))
    }

    pub fn stats(&self, route: Route) -> Stats {
        match route {
            Route::Skein => {
                let s = self.skein.stats();
                Stats {
                    skein_nodes: Some(s.nodes),
                    skein_cache_hits: Some(s.cache_hits),
                    skein_memo_entries: Some(s.entries),
                    trace_memo_entries: None,
                }
            }
            Route::Trace => Stats { trace_memo_entries: Some(self.trace_memo.len()), ..Default::default() },
        }
    }

    pub fn compute(&mut self, input: &Input, inv: Invariant, route: Route) -> Result<Poly, CliError> {
        match route {
            Route::Skein => self.skein_value(input, inv),
            Route::Trace => self.trace_value(input, inv),
        }
    }

    /// Computes and reports the elapsed time in milliseconds.
    pub fn timed(&mut self, input: &Input, inv: Invariant, route: Route) -> Result<(Poly, f64), CliError> {
        let t = Instant::now();
        let v = self.compute(input, inv, route)?;
        Ok((v, t.elapsed().as_secs_f64() * 1e3))
    }

    fn skein_value(&mut self, input: &Input, inv: Invariant) -> Result<Poly, CliError> {
        let d = input.diagram()?;
        let ctx = &self.skein;
        let need_orientation = |d: &TiedDiagram| {
            if d.is_oriented() {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{} needs an oriented diagram; add \"orientation\" to the PD file", inv.name())))
            }
        };
        Ok(match inv {
            Invariant::L => skein::eval_l(&d, ctx)?,
            Invariant::LHat => {
                need_orientation(&d)?;
                skein::eval_l_hat(&d, ctx)?
            }
            Invariant::Bracket => skein::eval_bracket(&d, ctx)?,
            Invariant::J => {
                need_orientation(&d)?;
                skein::eval_j(&d, ctx)?
            }
            Invariant::JonesT => {
                need_orientation(&d)?;
                skein::eval_jones_q(&d, ctx)?
            }
            Invariant::KauffmanClassical => skein::eval_classical_kauffman(&d, d.is_oriented(), ctx)?,
        })
    }

    fn trace_value(&mut self, input: &Input, inv: Invariant) -> Result<Poly, CliError> {
        let w = input.trace_word()?.clone();
        if inv == Invariant::KauffmanClassical {
            let k = tbmw::kauffman_via_trace(self.classical(), &w.untied())?;
            let azx = VarSet::azx();
            let v = k.substitute_all(&[("l", &Poly::var(&azx, "a", 1)), ("m", &Poly::var(&azx, "z", 1))], &azx)?;
            return Ok(v);
        }
        self.tied();
        let engine = self.tied.as_ref().expect("built above");
        let l_hat = tbmw::invariant_via_trace_memo(engine, &w, &mut self.trace_memo)?;
        let exp = w.exp() as i32;
        let l = || &l_hat * &Poly::var(&VarSet::azx(), "a", exp);
        let j = |l: &Poly| -> Result<Poly, CliError> {
            let bracket = skein::bracket_from_l(l)?;
            let sign = if exp % 2 == 0 { 1 } else { -1 };
            Ok(&Poly::var(&VarSet::bracket(), "A", -3 * exp).scale(&sign.into()) * &bracket)
        };
        Ok(match inv {
            Invariant::L => l(),
            Invariant::LHat => l_hat.clone(),
            Invariant::Bracket => skein::bracket_from_l(&l())?,
            Invariant::J => j(&l())?,
            Invariant::JonesT => skein::to_jones_q(&j(&l())?)?,
            Invariant::KauffmanClassical => unreachable!(),
        })
    }
}
