//! Summaries of the simultaneous-inseparability regions.

use std::io::Write;

use serde::Serialize;

use crate::broadcast::{region_boundaries, PWindow, Pair, Scenario};
use crate::error::{Error, Result};
use crate::format::num;
use crate::numeric::linspace;

/// Number of `p` values at which boundary curves are sampled.
pub const BOUNDARY_SAMPLES: usize = 101;

/// Boundary values at one `p`; `None` outside the pair's window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySample {
    pub p: f64,
    pub a1b1_lower: Option<f64>,
    pub a1b1_upper: Option<f64>,
    pub a2b2_lower: Option<f64>,
    pub a2b2_upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSummary {
    pub scenario: Scenario,
    /// Open `p` interval where both pairs can be entangled.
    pub p_window: [f64; 2],
    pub a1b1_window: PWindow,
    pub a2b2_window: PWindow,
    /// Widest open `|α|` interval reached anywhere in the region.
    pub alpha_span: [f64; 2],
    /// Names of the lower/upper boundary curves for `a1b1` and `a2b2`.
    pub curves: [&'static str; 4],
    pub boundary: Vec<BoundarySample>,
}

pub fn region_summary(scenario: Scenario) -> RegionSummary {
    let rb = region_boundaries(scenario);
    let boundary = linspace(0.0, 1.0, BOUNDARY_SAMPLES)
        .into_iter()
        .map(|p| {
            let a = rb.alpha_bounds(Pair::A1B1, p);
            let b = rb.alpha_bounds(Pair::A2B2, p);
            BoundarySample {
                p,
                a1b1_lower: a.map(|x| x.0),
                a1b1_upper: a.map(|x| x.1),
                a2b2_lower: b.map(|x| x.0),
                a2b2_upper: b.map(|x| x.1),
            }
        })
        .collect();
    let (lo, hi) = rb.alpha_span();
    RegionSummary {
        scenario,
        p_window: [rb.p_lower, rb.p_upper],
        a1b1_window: rb.pair_window(Pair::A1B1),
        a2b2_window: rb.pair_window(Pair::A2B2),
        alpha_span: [lo, hi],
        curves: match scenario {
            Scenario::Local => ["f-", "f+", "g-", "g+"],
            Scenario::Nonlocal => ["xi-", "xi+", "eta-", "eta+"],
        },
        boundary,
    }
}

fn window_text(w: &PWindow) -> String {
    format!(
        "{}{}, {}{}",
        if w.lo_closed { '[' } else { '(' },
        num(w.lo),
        num(w.hi),
        if w.hi_closed { ']' } else { ')' }
    )
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl RegionSummary {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s += &format!("scenario        {}\n", self.scenario);
        s += &format!(
            "p window        ({}, {})\n",
            num(self.p_window[0]),
            num(self.p_window[1])
        );
        s += &format!("a1b1 p window   {}\n", window_text(&self.a1b1_window));
        s += &format!("a2b2 p window   {}\n", window_text(&self.a2b2_window));
        s += &format!(
            "|alpha| span    ({}, {})\n",
            num(self.alpha_span[0]),
            num(self.alpha_span[1])
        );
        s += &format!(
            "boundary curves a1b1: {}/{}, a2b2: {}/{} ({} samples; use --format csv or json)\n",
            self.curves[0],
            self.curves[1],
            self.curves[2],
            self.curves[3],
            self.boundary.len()
        );
        s
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "scenario,p,a1b1_lower,a1b1_upper,a2b2_lower,a2b2_upper"
        )?;
        for b in &self.boundary {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                self.scenario,
                num(b.p),
                opt(b.a1b1_lower),
                opt(b.a1b1_upper),
                opt(b.a2b2_lower),
                opt(b.a2b2_upper)
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Serialize)]
struct JsonRegions<'a> {
    schema: u32,
    regions: &'a [RegionSummary],
}

pub fn write_json<W: Write>(summaries: &[RegionSummary], mut out: W) -> Result<()> {
    let doc = JsonRegions {
        schema: crate::sweep::JSON_SCHEMA,
        regions: summaries,
    };
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
