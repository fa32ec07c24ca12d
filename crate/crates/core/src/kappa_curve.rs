//! The threshold kappa and the implicit curve |X(s)| = 1.
//!
//! Near the critical line log|X(1/2 + u + it)| is odd in u, so besides the
//! line itself the level set has an off-line branch that closes on the line
//! where the sigma-derivative of log|X| vanishes. kappa is the height of
//! that junction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::dh::log_abs_x_in;
use crate::error::{Error, Result};
use crate::precision::{parse_decimal_rational, rational_to_apreal, APComplex, APReal, PrecisionContext, Workspace};
use crate::specfun::gamma::digamma_in;

/// Largest accepted offset from the critical line.
pub const MAX_EPSILON: f64 = 1e-3;
/// Upper end of the t-range searched for kappa.
pub const KAPPA_T_MAX: i64 = 3;
/// Samples over (0, KAPPA_T_MAX] used to bracket the root.
const KAPPA_SAMPLES: i64 = 60;
const MAX_BISECTIONS: usize = 2000;

#[derive(Debug, Clone)]
pub struct KappaResult {
    pub kappa: APReal,
    pub epsilon: APReal,
    /// Sampling bracket containing the root.
    pub bracket: (APReal, APReal),
    /// |log|X|| at the returned root.
    pub residual: APReal,
    /// Root of -ln(5/pi) - Re Psi(3/4 + it/2), the epsilon-free limit.
    pub reduction_root: APReal,
    pub bisections: usize,
}

/// Bisection for a sign change of `g` in [lo, hi]; stops when |g| drops to
/// 10^tol_log10 or the interval stops shrinking.
fn bisect(
    ws: &mut Workspace,
    mut lo: APReal,
    mut hi: APReal,
    tol_log10: f64,
    g: &mut dyn FnMut(&mut Workspace, &APReal) -> Result<APReal>,
) -> Result<(APReal, APReal, usize)> {
    let mut g_lo = g(ws, &lo)?;
    let width_floor = -(ws.ctx().total_digits() as f64);
    let mut mid = lo.clone();
    let mut g_mid = g_lo.clone();
    for k in 0..MAX_BISECTIONS {
        mid = (&lo + &hi).mul_pow2(-1);
        g_mid = g(ws, &mid)?;
        if g_mid.is_zero() || g_mid.log10_abs() <= tol_log10 || (&hi - &lo).log10_abs() < width_floor {
            return Ok((mid, g_mid, k + 1));
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid.clone();
            g_lo = g_mid.clone();
        } else {
            hi = mid.clone();
        }
    }
    Ok((mid, g_mid, MAX_BISECTIONS))
}

/// Largest t in (0, 3] with |X(1/2 + epsilon + it)| = 1, found by sampling
/// and bisection, with the epsilon-free reduction root as a cross-check.
pub fn kappa_solve(epsilon: &APReal, ctx: &PrecisionContext) -> Result<KappaResult> {
    let eps_f = epsilon.to_f64();
    if !epsilon.is_positive() || eps_f > MAX_EPSILON {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, 1e-3], got {}",
            epsilon.to_decimal(20)
        )));
    }
    let needed = libm::ceil(-2.0 * epsilon.log10_abs() + 30.0) as u32;
    if ctx.decimal_digits() < needed {
        return Err(Error::PrecisionTooLow {
            requested: ctx.decimal_digits(),
            minimum: needed,
        });
    }
    let mut ws = ctx.workspace();
    let sigma = ws.ratio(1, 2) + ws.round(epsilon);
    let mut g = |ws: &mut Workspace, t: &APReal| log_abs_x_in(ws, &APComplex::new(sigma.clone(), t.clone()));

    let step = ws.ratio(KAPPA_T_MAX, KAPPA_SAMPLES);
    let samples: Vec<(APReal, APReal)> = (1..=KAPPA_SAMPLES)
        .map(|k| {
            let t = &step * &ws.int(k);
            g(&mut ws, &t).map(|v| (t, v))
        })
        .collect::<Result<_>>()?;
    let Some(pair) = samples
        .windows(2)
        .rev()
        .find(|w| w[0].1.signum() * w[1].1.signum() <= 0 && w[0].1.signum() != w[1].1.signum())
    else {
        return Err(Error::NoRootInBracket(format!(
            "log|X(1/2 + {} + it)| on t in (0, {KAPPA_T_MAX}]",
            epsilon.to_decimal(10)
        )));
    };
    let (t_lo, t_hi) = (pair[0].0.clone(), pair[1].0.clone());
    let tol = -(ctx.decimal_digits() as f64 - 15.0);
    let (kappa, residual, bisections) = bisect(&mut ws, t_lo.clone(), t_hi.clone(), tol, &mut g)?;

    let mut h = |ws: &mut Workspace, t: &APReal| -> Result<APReal> {
        let z = APComplex::new(ws.ratio(3, 4), t.mul_pow2(-1));
        let psi = digamma_in(ws, &z)?;
        Ok(-ws.ln_5_over_pi() - psi.re)
    };
    let (reduction_root, _, _) = bisect(&mut ws, t_lo.clone(), t_hi.clone(), tol, &mut h)?;
    Ok(KappaResult {
        kappa,
        epsilon: ws.round(epsilon),
        bracket: (t_lo, t_hi),
        residual: residual.abs(),
        reduction_root,
        bisections,
    })
}

/// Axis-aligned rectangle with exact rational corners.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveBox {
    pub sigma_min: BigRational,
    pub sigma_max: BigRational,
    pub t_min: BigRational,
    pub t_max: BigRational,
}

impl CurveBox {
    /// Parses four decimal literals.
    pub fn parse(sigma_min: &str, sigma_max: &str, t_min: &str, t_max: &str) -> Result<Self> {
        let b = Self {
            sigma_min: parse_decimal_rational(sigma_min)?,
            sigma_max: parse_decimal_rational(sigma_max)?,
            t_min: parse_decimal_rational(t_min)?,
            t_max: parse_decimal_rational(t_max)?,
        };
        if b.sigma_min >= b.sigma_max || b.t_min >= b.t_max {
            return Err(Error::Domain("curve box must have positive width and height".into()));
        }
        Ok(b)
    }

    /// sigma in [-6, 7], t in [-3, 3].
    pub fn default_box() -> Self {
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        Self {
            sigma_min: int(-6),
            sigma_max: int(7),
            t_min: int(-3),
            t_max: int(3),
        }
    }
}

/// Default node counts: spacing 0.05 on the default box, so that nodes fall
/// on sigma = 1/2, t = 0 and every integer sigma.
pub const DEFAULT_RESOLUTION: (usize, usize) = (261, 121);
pub const MIN_RESOLUTION: usize = 8;

/// Node layout of a grid, independent of the values.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub bbox: CurveBox,
    pub n_sigma: usize,
    pub n_t: usize,
    pub ctx: PrecisionContext,
}

impl GridSpec {
    pub fn new(bbox: CurveBox, n_sigma: usize, n_t: usize, ctx: PrecisionContext) -> Result<Self> {
        if n_sigma < MIN_RESOLUTION || n_t < MIN_RESOLUTION {
            return Err(Error::Domain(format!(
                "resolution must be at least {MIN_RESOLUTION} per axis, got {n_sigma} x {n_t}"
            )));
        }
        if bbox.sigma_min >= bbox.sigma_max || bbox.t_min >= bbox.t_max {
            return Err(Error::Domain("curve box must have positive width and height".into()));
        }
        Ok(Self {
            bbox,
            n_sigma,
            n_t,
            ctx,
        })
    }

    /// Exact sigma of node column i.
    pub fn sigma_exact(&self, i: usize) -> BigRational {
        lerp(&self.bbox.sigma_min, &self.bbox.sigma_max, i, self.n_sigma)
    }

    /// Exact t of node row j.
    pub fn t_exact(&self, j: usize) -> BigRational {
        lerp(&self.bbox.t_min, &self.bbox.t_max, j, self.n_t)
    }

    pub fn sigma(&self, i: usize) -> APReal {
        rational_to_apreal(&self.sigma_exact(i), self.ctx.binary_precision())
    }

    pub fn t(&self, j: usize) -> APReal {
        rational_to_apreal(&self.t_exact(j), self.ctx.binary_precision())
    }

    /// Node index in the row-major value array (rows are t).
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n_sigma + i
    }

    /// True if node (i, j) is exactly a zero or pole of X.
    pub fn node_is_singular(&self, i: usize, j: usize) -> bool {
        if !self.t_exact(j).is_zero() {
            return false;
        }
        let sigma = self.sigma_exact(i);
        if !sigma.is_integer() {
            return false;
        }
        match sigma.to_integer().to_i64() {
            Some(k) => (k >= 2 && k % 2 == 0) || (k <= -1 && k % 2 != 0),
            None => false,
        }
    }

    /// Zeros and poles of X inside the closed box.
    pub fn singular_points(&self) -> Vec<i64> {
        let zero = BigRational::zero();
        if self.bbox.t_min > zero || self.bbox.t_max < zero {
            return Vec::new();
        }
        let lo = self.bbox.sigma_min.ceil().to_integer().to_i64().unwrap_or(i64::MIN);
        let hi = self.bbox.sigma_max.floor().to_integer().to_i64().unwrap_or(i64::MAX);
        (lo..=hi)
            .filter(|&k| (k >= 2 && k % 2 == 0) || (k <= -1 && k % 2 != 0))
            .collect()
    }

    /// Cells (i, j) whose closed rectangle contains a zero or pole of X.
    pub fn masked_cells(&self) -> Vec<bool> {
        let mut mask = vec![false; (self.n_sigma - 1) * (self.n_t - 1)];
        let zero = BigRational::zero();
        for k in self.singular_points() {
            let p = BigRational::from_integer(BigInt::from(k));
            for j in 0..self.n_t - 1 {
                if !(self.t_exact(j) <= zero && zero <= self.t_exact(j + 1)) {
                    continue;
                }
                for i in 0..self.n_sigma - 1 {
                    if self.sigma_exact(i) <= p && p <= self.sigma_exact(i + 1) {
                        mask[j * (self.n_sigma - 1) + i] = true;
                    }
                }
            }
        }
        mask
    }
}

fn lerp(lo: &BigRational, hi: &BigRational, k: usize, n: usize) -> BigRational {
    let frac = BigRational::new(BigInt::from(k), BigInt::from(n - 1));
    lo + (hi - lo) * frac
}

/// log|X| for node rows `rows`, row-major; singular nodes are None.
pub fn evaluate_rows(spec: &GridSpec, rows: Range<usize>) -> Result<Vec<Option<APReal>>> {
    let mut ws = spec.ctx.workspace();
    let sigmas: Vec<APReal> = (0..spec.n_sigma).map(|i| spec.sigma(i)).collect();
    let mut out = Vec::with_capacity(rows.len() * spec.n_sigma);
    for j in rows {
        let t = spec.t(j);
        for (i, sigma) in sigmas.iter().enumerate() {
            if spec.node_is_singular(i, j) {
                out.push(None);
                continue;
            }
            let s = APComplex::new(sigma.clone(), t.clone());
            out.push(Some(log_abs_x_in(&mut ws, &s)?));
        }
    }
    Ok(out)
}

/// Polyline of (sigma, t) points.
pub type Polyline = Vec<(APReal, APReal)>;

#[derive(Debug, Clone)]
pub struct CurveGrid {
    pub spec: GridSpec,
    /// log|X| per node, row-major by t; None at zeros and poles of X.
    pub values: Vec<Option<APReal>>,
    /// Per cell, row-major by t: true if the cell contains a zero or pole.
    pub masked: Vec<bool>,
    pub segments: Vec<Polyline>,
}

impl CurveGrid {
    /// Assembles a grid from precomputed node values and traces its
    /// level set.
    pub fn assemble(spec: GridSpec, values: Vec<Option<APReal>>) -> Result<Self> {
        if values.len() != spec.n_sigma * spec.n_t {
            return Err(Error::Domain(format!(
                "expected {} node values, got {}",
                spec.n_sigma * spec.n_t,
                values.len()
            )));
        }
        let masked = spec.masked_cells();
        let mut grid = Self {
            spec,
            values,
            masked,
            segments: Vec::new(),
        };
        grid.segments = trace_segments(&grid);
        Ok(grid)
    }

    pub fn value(&self, i: usize, j: usize) -> Option<&APReal> {
        self.values[self.spec.index(i, j)].as_ref()
    }

    pub fn cell_masked(&self, i: usize, j: usize) -> bool {
        self.masked[j * (self.spec.n_sigma - 1) + i]
    }

    /// Largest |t| among segment points off the line sigma = 1/2 but
    /// within `cells` cell widths of it (plus half a cell, so that node
    /// columns at exactly that distance count despite rounding).
    pub fn apex(&self, cells: usize) -> Option<APReal> {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let bits = self.spec.ctx.binary_precision();
        let half = rational_to_apreal(&half, bits);
        let width = rational_to_apreal(
            &((&self.spec.bbox.sigma_max - &self.spec.bbox.sigma_min)
                / BigRational::from_integer(BigInt::from(self.spec.n_sigma as i64 - 1))),
            bits,
        );
        let reach = &width * &APReal::from_ratio(2 * cells as i64 + 1, 2, bits);
        let mut best: Option<APReal> = None;
        for (sigma, t) in self.segments.iter().flatten() {
            let d = (sigma - &half).abs();
            if d.is_zero() || d > reach {
                continue;
            }
            let at = t.abs();
            if best.as_ref().map_or(true, |b| &at > b) {
                best = Some(at);
            }
        }
        best
    }
}

/// log|X| over the box at `resolution` = (n_sigma, n_t) nodes, with its
/// |X| = 1 segments.
pub fn implicit_curve_grid(
    bbox: &CurveBox,
    resolution: (usize, usize),
    ctx: &PrecisionContext,
) -> Result<CurveGrid> {
    let spec = GridSpec::new(bbox.clone(), resolution.0, resolution.1, *ctx)?;
    let values = evaluate_rows(&spec, 0..spec.n_t)?;
    CurveGrid::assemble(spec, values)
}

/// Edge of the node lattice: horizontal from (i, j) to (i+1, j), or
/// vertical from (i, j) to (i, j+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

fn positive(v: &APReal) -> bool {
    !v.is_negative()
}

/// Zero crossing on an edge by linear interpolation; a zero endpoint is
/// returned exactly.
fn crossing(grid: &CurveGrid, edge: Edge) -> (APReal, APReal) {
    let spec = &grid.spec;
    let ((i0, j0), (i1, j1)) = match edge {
        Edge::H(i, j) => ((i, j), (i + 1, j)),
        Edge::V(i, j) => ((i, j), (i, j + 1)),
    };
    let v0 = grid.value(i0, j0).expect("unmasked corner");
    let v1 = grid.value(i1, j1).expect("unmasked corner");
    if v0.is_zero() {
        return (spec.sigma(i0), spec.t(j0));
    }
    if v1.is_zero() {
        return (spec.sigma(i1), spec.t(j1));
    }
    let frac = v0 / &(v0 - v1);
    match edge {
        Edge::H(..) => {
            let (a, b) = (spec.sigma(i0), spec.sigma(i1));
            (&a + &(&(&b - &a) * &frac), spec.t(j0))
        }
        Edge::V(..) => {
            let (a, b) = (spec.t(j0), spec.t(j1));
            (spec.sigma(i0), &a + &(&(&b - &a) * &frac))
        }
    }
}

/// Marching squares on log|X|. Zero counts as positive; saddle cells are
/// resolved by the sign at the cell centre.
pub fn trace_segments(grid: &CurveGrid) -> Vec<Polyline> {
    let spec = &grid.spec;
    let mut ws = spec.ctx.workspace();
    let mut pieces: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..spec.n_t - 1 {
        for i in 0..spec.n_sigma - 1 {
            if grid.cell_masked(i, j) {
                continue;
            }
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let Some(vals) = corners
                .iter()
                .map(|&(a, b)| grid.value(a, b))
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let bits: Vec<bool> = vals.iter().map(|v| positive(v)).collect();
            // edges in corner order: bottom, right, top, left
            let edges = [Edge::H(i, j), Edge::V(i + 1, j), Edge::H(i, j + 1), Edge::V(i, j)];
            let cut: Vec<usize> = (0..4).filter(|&k| bits[k] != bits[(k + 1) % 4]).collect();
            match cut.len() {
                2 => pieces.push((edges[cut[0]], edges[cut[1]])),
                4 => {
                    let centre = APComplex::new(
                        (spec.sigma(i) + spec.sigma(i + 1)).mul_pow2(-1),
                        (spec.t(j) + spec.t(j + 1)).mul_pow2(-1),
                    );
                    let centre_positive = log_abs_x_in(&mut ws, &centre).map_or(true, |v| positive(&v));
                    // join the edges around the corners that differ from the centre
                    if centre_positive == bits[0] {
                        pieces.push((edges[0], edges[1]));
                        pieces.push((edges[2], edges[3]));
                    } else {
                        pieces.push((edges[3], edges[0]));
                        pieces.push((edges[1], edges[2]));
                    }
                }
                _ => {}
            }
        }
    }
    chain(grid, pieces)
}

/// Joins cell segments sharing an edge into polylines. Open chains start
/// from their smallest free end; closed loops from their smallest edge.
fn chain(grid: &CurveGrid, pieces: Vec<(Edge, Edge)>) -> Vec<Polyline> {
    let mut adjacency: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (k, (a, b)) in pieces.iter().enumerate() {
        adjacency.entry(*a).or_default().push(k);
        adjacency.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; pieces.len()];
    let mut out = Vec::new();
    let walk = |start: Edge, used: &mut Vec<bool>| -> Option<Vec<Edge>> {
        let mut path = vec![start];
        let mut at = start;
        loop {
            let next = adjacency[&at].iter().copied().find(|&k| !used[k]);
            let Some(k) = next else { break };
            used[k] = true;
            let (a, b) = pieces[k];
            at = if a == at { b } else { a };
            path.push(at);
        }
        (path.len() > 1).then_some(path)
    };
    let ends: Vec<Edge> = adjacency
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(e, _)| *e)
        .collect();
    for e in ends {
        if let Some(p) = walk(e, &mut used) {
            out.push(p);
        }
    }
    let all: Vec<Edge> = adjacency.keys().copied().collect();
    for e in all {
        if let Some(p) = walk(e, &mut used) {
            out.push(p);
        }
    }
    out.into_iter()
        .map(|p| p.into_iter().map(|e| crossing(grid, e)).collect())
        .collect()
}
