//! θ-sweeps over the parametric families, with CSV and SVG output.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::bounds::{helstrom, pairwise_bound, srm_bound};
use crate::ensemble::{make_four_state, make_three_state, Ensemble, ThreeStateVariant};
use crate::entropy::entropic_bound;
use crate::error::{Error, Result};
use crate::oracle::{optimal_success, OracleOptions};
use crate::parallel::{self, Execution};

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    ThreeStateOriginal,
    ThreeStateReplaced,
    FourState {
        q: f64,
    },
    /// A fixed ensemble; every grid point evaluates the same states.
    File(Box<Ensemble>),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::ThreeStateOriginal => "three_state_original",
            Family::ThreeStateReplaced => "three_state_replaced",
            Family::FourState { .. } => "four_state",
            Family::File(_) => "file",
        }
    }

    pub fn at(&self, theta: f64) -> Result<Ensemble> {
        match self {
            Family::ThreeStateOriginal => Ok(make_three_state(theta, ThreeStateVariant::Original)),
            Family::ThreeStateReplaced => {
                Ok(make_three_state(theta, ThreeStateVariant::ReplacedPsi2))
            }
            Family::FourState { q } => make_four_state(theta, *q),
            Family::File(e) => Ok((**e).clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Entropic,
    Srm,
    Pairwise,
    Helstrom,
    /// Adds two columns, `oracle_primal` and `oracle_dual`.
    Oracle,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        BoundKind::Entropic,
        BoundKind::Srm,
        BoundKind::Pairwise,
        BoundKind::Helstrom,
        BoundKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Entropic => "entropic",
            BoundKind::Srm => "srm",
            BoundKind::Pairwise => "pairwise",
            BoundKind::Helstrom => "helstrom",
            BoundKind::Oracle => "oracle",
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            BoundKind::Entropic => &["entropic"],
            BoundKind::Srm => &["srm"],
            BoundKind::Pairwise => &["pairwise"],
            BoundKind::Helstrom => &["helstrom"],
            BoundKind::Oracle => &["oracle_primal", "oracle_dual"],
        }
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::InconsistentInput(format!("unknown bound `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub theta_min: f64,
    pub theta_max: f64,
    pub points: usize,
    pub bounds: Vec<BoundKind>,
    pub oracle: OracleOptions,
}

impl SweepSpec {
    /// θ ∈ [0, π/2] on 181 points with the three closed-form bounds.
    pub fn new(family: Family) -> Self {
        Self {
            family,
            theta_min: 0.0,
            theta_max: std::f64::consts::FRAC_PI_2,
            points: 181,
            bounds: vec![BoundKind::Entropic, BoundKind::Srm, BoundKind::Pairwise],
            oracle: OracleOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InconsistentInput(format!(
                "sweep needs at least 2 points, got {}",
                self.points
            )));
        }
        if !(self.theta_min.is_finite()
            && self.theta_max.is_finite()
            && self.theta_min < self.theta_max)
        {
            return Err(Error::InconsistentInput(format!(
                "theta range [{}, {}] is empty",
                self.theta_min, self.theta_max
            )));
        }
        if self.bounds.is_empty() {
            return Err(Error::InconsistentInput("no bounds requested".into()));
        }
        if let Family::FourState { q } = self.family {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::ProbabilityOutOfRange { value: q });
            }
        }
        Ok(())
    }

    /// Inclusive, linearly spaced grid; the last point is exactly `theta_max`.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.theta_max - self.theta_min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.theta_max
                } else {
                    self.theta_min + step * i as f64
                }
            })
            .collect()
    }

    /// Requested bounds, duplicates dropped, in request order.
    fn unique_bounds(&self) -> Vec<BoundKind> {
        let mut out = Vec::new();
        for &b in &self.bounds {
            if !out.contains(&b) {
                out.push(b);
            }
        }
        out
    }

    pub fn columns(&self) -> Vec<&'static str> {
        self.unique_bounds()
            .into_iter()
            .flat_map(|b| b.columns().iter().copied())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    /// One value per column of the sweep, in column order.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub family: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<SweepRow>,
}

impl Sweep {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }
}

fn evaluate(e: &Ensemble, bounds: &[BoundKind], opts: &OracleOptions) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for b in bounds {
        match b {
            BoundKind::Entropic => values.push(entropic_bound(e)?),
            BoundKind::Srm => values.push(srm_bound(e)?),
            BoundKind::Pairwise => values.push(pairwise_bound(e)?),
            BoundKind::Helstrom => values.push(helstrom(e)?),
            BoundKind::Oracle => {
                let r = optimal_success(e, opts)?;
                values.push(r.primal);
                values.push(r.dual);
            }
        }
    }
    Ok(values)
}

pub fn run_sweep(spec: &SweepSpec, exec: Execution) -> Result<Sweep> {
    spec.validate()?;
    let bounds = spec.unique_bounds();
    let rows = parallel::try_map(&spec.grid(), exec, |&theta| {
        let e = spec.family.at(theta)?;
        Ok(SweepRow {
            theta,
            values: evaluate(&e, &bounds, &spec.oracle)?,
        })
    })?;
    Ok(Sweep {
        family: spec.family.name(),
        columns: spec.columns(),
        rows,
    })
}

/// `theta,<column>...` header, then one line per grid point with every value
/// printed in shortest round-trip form.
pub fn to_csv(sweep: &Sweep) -> String {
    let mut out = String::from("theta");
    for c in &sweep.columns {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for row in &sweep.rows {
        write!(out, "{}", row.theta).unwrap();
        for v in &row.values {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn from_csv(text: &str) -> Result<(Vec<String>, Vec<SweepRow>)> {
    let bad = |line: usize, msg: &str| Error::Schema {
        field: format!("line {line}"),
        message: msg.to_owned(),
    };
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| bad(1, "empty file"))?
        .split(',')
        .map(str::to_owned)
        .collect();
    if header.first().map(String::as_str) != Some("theta") {
        return Err(bad(1, "header must start with `theta`"));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let nums = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(i + 2, &e.to_string()))?;
        if nums.len() != header.len() {
            return Err(bad(i + 2, "wrong number of fields"));
        }
        rows.push(SweepRow {
            theta: nums[0],
            values: nums[1..].to_vec(),
        });
    }
    Ok((header[1..].to_vec(), rows))
}

fn stroke_style(column: &str) -> (&'static str, &'static str) {
    // (colour, dash pattern): solid entropic, dashed srm, dot-dash pairwise
    match column {
        "entropic" => ("#1f77b4", ""),
        "srm" => ("#d62728", "8,5"),
        "pairwise" => ("#2ca02c", "10,4,2,4"),
        "helstrom" => ("#9467bd", "2,3"),
        "oracle_primal" => ("#555555", "1,2"),
        _ => ("#aaaaaa", "1,2"),
    }
}

/// Single-panel line chart, one polyline per column.
pub fn to_svg(sweep: &Sweep) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 130.0;
    const TOP: f64 = 30.0;
    const BOTTOM: f64 = 50.0;

    let x0 = sweep.rows.first().map(|r| r.theta).unwrap_or(0.0);
    let x1 = sweep.rows.last().map(|r| r.theta).unwrap_or(1.0);
    let all = sweep.rows.iter().flat_map(|r| r.values.iter().copied());
    let (mut y0, mut y1) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !(y0.is_finite() && y1.is_finite()) {
        (y0, y1) = (0.0, 1.0);
    }
    let pad = ((y1 - y0) * 0.05).max(0.01);
    y0 = (y0 - pad).max(0.0);
    y1 = (y1 + pad).min(1.05);
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0).max(f64::MIN_POSITIVE) * (W - LEFT - RIGHT);
    let sy = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="18" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        sweep.family
    )
    .unwrap();
    writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    )
    .unwrap();
    for k in 0..=4 {
        let fx = x0 + (x1 - x0) * k as f64 / 4.0;
        let fy = y0 + (y1 - y0) * k as f64 / 4.0;
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{fx:.3}</text>"#,
            sx(fx),
            H - BOTTOM + 16.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{fy:.3}</text>"#,
            LEFT - 6.0,
            sy(fy) + 4.0
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">theta</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 12.0
    )
    .unwrap();

    for (ci, column) in sweep.columns.iter().enumerate() {
        let (colour, dash) = stroke_style(column);
        let points: Vec<String> = sweep
            .rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", sx(r.theta), sy(r.values[ci])))
            .collect();
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.8"{dash_attr} points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
        let ly = TOP + 16.0 + 20.0 * ci as f64;
        let lx = W - RIGHT + 10.0;
        writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="1.8"{dash_attr}/>"#,
            lx + 30.0
        )
        .unwrap();
        writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{column}</text>"#,
            lx + 36.0,
            ly + 4.0
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn grid_is_inclusive_linear() {
        let mut spec = SweepSpec::new(Family::ThreeStateOriginal);
        spec.points = 5;
        let g = spec.grid();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[4], FRAC_PI_2);
        assert!((g[2] - FRAC_PI_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let mut spec = SweepSpec::new(Family::FourState { q: 0.5 });
        spec.points = 1;
        assert!(spec.validate().is_err());
        spec.points = 2;
        spec.theta_max = spec.theta_min;
        assert!(spec.validate().is_err());
        let spec = SweepSpec::new(Family::FourState { q: 2.0 });
        assert!(spec.validate().is_err());
    }

    #[test]
    fn columns_expand_oracle_and_dedupe() {
        let mut spec = SweepSpec::new(Family::ThreeStateOriginal);
        spec.bounds = vec![BoundKind::Srm, BoundKind::Oracle, BoundKind::Srm];
        assert_eq!(spec.columns(), vec!["srm", "oracle_primal", "oracle_dual"]);
        assert_eq!(
            "pairwise".parse::<BoundKind>().unwrap(),
            BoundKind::Pairwise
        );
        assert!("nope".parse::<BoundKind>().is_err());
    }

    #[test]
    fn two_point_sweep_and_csv_roundtrip() {
        let mut spec = SweepSpec::new(Family::ThreeStateReplaced);
        spec.points = 2;
        let s = run_sweep(&spec, Execution::Sequential).unwrap();
        assert_eq!(s.rows.len(), 2);
        let csv = to_csv(&s);
        assert!(csv.starts_with("theta,entropic,srm,pairwise\n"));
        let (cols, rows) = from_csv(&csv).unwrap();
        assert_eq!(cols, vec!["entropic", "srm", "pairwise"]);
        assert_eq!(rows, s.rows);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let mut spec = SweepSpec::new(Family::ThreeStateOriginal);
        spec.points = 17;
        spec.bounds = BoundKind::ALL
            .iter()
            .copied()
            .filter(|b| *b != BoundKind::Helstrom)
            .collect();
        let a = run_sweep(&spec, Execution::Parallel).unwrap();
        let b = run_sweep(&spec, Execution::Sequential).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn helstrom_column_needs_two_states() {
        let mut spec = SweepSpec::new(Family::FourState { q: 0.5 });
        spec.bounds = vec![BoundKind::Helstrom];
        assert!(matches!(
            run_sweep(&spec, Execution::Sequential).unwrap_err(),
            Error::WrongMemberCount { .. }
        ));
    }

    #[test]
    fn svg_has_one_polyline_per_column() {
        let mut spec = SweepSpec::new(Family::FourState { q: 0.5 });
        spec.points = 3;
        let svg = to_svg(&run_sweep(&spec, Execution::Sequential).unwrap());
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains(r#"stroke-dasharray="8,5""#));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
