//! Exact rational linear programming.
//!
//! A dense two-phase simplex over [`Rational`] with Bland's anti-cycling
//! rule. Instances in this crate are tiny (dominance tests, tremble
//! feasibility, correlated minmax), so worst-case pivot counts are
//! irrelevant and exactness is everything.
//!
//! Every outcome is re-verified against the original program before it is
//! returned:
//!
//! - optimal solutions pass an exact KKT check (primal feasibility, dual
//!   sign conditions, complementary slackness, zero duality gap);
//! - infeasibility comes with a Farkas certificate checked by the
//!   box-minimum argument;
//! - unboundedness comes with a feasible point and a recession ray, both
//!   checked exactly.
//!
//! The dual convention for `maximize c.x` is: `dual[i] >= 0` for `<=` rows,
//! `dual[i] <= 0` for `>=` rows, free for `=` rows. With reduced costs
//! `r = c - A' dual`, the dual objective is
//! `dual.b + sum(r_j > 0) r_j u_j + sum(r_j < 0) r_j l_j`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Relation of one constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// Per-variable bounds; `None` means unbounded on that side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl VarBounds {
    pub fn nonneg() -> Self {
        VarBounds { lower: Some(Rational::zero()), upper: None }
    }

    pub fn free() -> Self {
        VarBounds { lower: None, upper: None }
    }

    pub fn interval(lower: Rational, upper: Rational) -> Self {
        VarBounds { lower: Some(lower), upper: Some(upper) }
    }
}

/// `maximize objective . x` subject to `rows[i] . x (senses[i]) rhs[i]` and
/// the per-variable bounds.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<Rational>,
    pub bounds: Vec<VarBounds>,
}

impl LinearProgram {
    /// A program over `n` nonnegative variables with no rows yet.
    pub fn new(objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            bounds: vec![VarBounds::nonneg(); n],
        }
    }

    pub fn push_row(&mut self, coeffs: Vec<Rational>, sense: Sense, rhs: Rational) {
        self.rows.push(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::LpDimension(format!(
                "{} bounds for {} variables",
                self.bounds.len(),
                n
            )));
        }
        if self.senses.len() != self.rows.len() || self.rhs.len() != self.rows.len() {
            return Err(Error::LpDimension("senses/rhs length differs from row count".to_string()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LpDimension(format!(
                    "row {i} has {} coefficients for {} variables",
                    row.len(),
                    n
                )));
            }
        }
        Ok(())
    }
}

/// Exact optimum with its dual certificate.
#[derive(Debug, Clone)]
pub struct OptimalSolution {
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    pub objective: Rational,
}

/// Row multipliers proving infeasibility (see [`verify_farkas`]).
#[derive(Debug, Clone)]
pub struct FarkasCertificate {
    pub row_multipliers: Vec<Rational>,
}

/// Feasible point plus an improving recession direction.
#[derive(Debug, Clone)]
pub struct UnboundedRay {
    pub point: Vec<Rational>,
    pub ray: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(OptimalSolution),
    Infeasible(FarkasCertificate),
    Unbounded(UnboundedRay),
}

#[derive(Debug, Clone)]
pub enum FeasibilityOutcome {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

/// Solve to a verified outcome.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;

    // An empty bound interval makes the program trivially infeasible; the
    // zero-multiplier certificate is the "empty box" case of verify_farkas.
    for b in &lp.bounds {
        if let (Some(l), Some(u)) = (&b.lower, &b.upper) {
            if l > u {
                let cert =
                    FarkasCertificate { row_multipliers: vec![Rational::zero(); lp.rows.len()] };
                verify_farkas(lp, &cert)?;
                return Ok(LpOutcome::Infeasible(cert));
            }
        }
    }

    let std = StdForm::build(lp);
    let outcome = match solve_std(&std.a, &std.b, &std.c)? {
        StdOutcome::Optimal { x, y, value } => {
            let primal = std.map_point(&x);
            let dual = std.map_duals(&y);
            let objective = value + &std.obj_offset;
            let sol = OptimalSolution { primal, dual, objective };
            verify_optimal(lp, &sol)?;
            LpOutcome::Optimal(sol)
        }
        StdOutcome::Infeasible { y } => {
            let cert = FarkasCertificate { row_multipliers: std.map_duals(&y) };
            verify_farkas(lp, &cert)?;
            LpOutcome::Infeasible(cert)
        }
        StdOutcome::Unbounded { x, d } => {
            let ray = UnboundedRay { point: std.map_point(&x), ray: std.map_ray(&d) };
            verify_unbounded(lp, &ray)?;
            LpOutcome::Unbounded(ray)
        }
    };
    Ok(outcome)
}

/// Feasibility with a verified certificate either way.
pub fn feasible(lp: &LinearProgram) -> Result<FeasibilityOutcome> {
    let mut probe = lp.clone();
    probe.objective = vec![Rational::zero(); lp.num_vars()];
    Ok(match solve(&probe)? {
        LpOutcome::Optimal(sol) => FeasibilityOutcome::Feasible(sol.primal),
        LpOutcome::Infeasible(cert) => FeasibilityOutcome::Infeasible(cert),
        LpOutcome::Unbounded(_) => {
            return Err(Error::Internal("zero objective cannot be unbounded".into()))
        }
    })
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn row_value(lp: &LinearProgram, i: usize, x: &[Rational]) -> Rational {
    dot(&lp.rows[i], x)
}

/// Exact KKT check of a claimed optimum. Errors describe the first violated
/// condition.
pub fn verify_optimal(lp: &LinearProgram, sol: &OptimalSolution) -> Result<()> {
    lp.validate()?;
    let n = lp.num_vars();
    if sol.primal.len() != n || sol.dual.len() != lp.rows.len() {
        return Err(Error::LpDimension("solution shape mismatch".to_string()));
    }
    check_point_feasible(lp, &sol.primal)?;

    // Dual sign conditions and row complementary slackness.
    for i in 0..lp.rows.len() {
        let y = &sol.dual[i];
        let ok_sign = match lp.senses[i] {
            Sense::Le => y >= &Rational::zero(),
            Sense::Ge => y <= &Rational::zero(),
            Sense::Eq => true,
        };
        if !ok_sign {
            return Err(Error::Internal(format!("dual {i} has the wrong sign")));
        }
        if !y.is_zero() && row_value(lp, i, &sol.primal) != lp.rhs[i] {
            return Err(Error::Internal(format!("dual {i} nonzero on a slack row")));
        }
    }

    // Reduced costs against variable bounds, and the gap formula.
    let mut dual_objective = dot(&sol.dual, &lp.rhs);
    for j in 0..n {
        let mut r = lp.objective[j].clone();
        for i in 0..lp.rows.len() {
            r -= &sol.dual[i] * &lp.rows[i][j];
        }
        if r > Rational::zero() {
            match &lp.bounds[j].upper {
                Some(u) if &sol.primal[j] == u => dual_objective += &r * u,
                _ => {
                    return Err(Error::Internal(format!(
                        "variable {j} has positive reduced cost but is not at its upper bound"
                    )))
                }
            }
        } else if r < Rational::zero() {
            match &lp.bounds[j].lower {
                Some(l) if &sol.primal[j] == l => dual_objective += &r * l,
                _ => {
                    return Err(Error::Internal(format!(
                        "variable {j} has negative reduced cost but is not at its lower bound"
                    )))
                }
            }
        }
    }

    let primal_objective = dot(&lp.objective, &sol.primal);
    if primal_objective != sol.objective {
        return Err(Error::Internal("stored objective differs from c.x".to_string()));
    }
    if primal_objective != dual_objective {
        return Err(Error::Internal("nonzero duality gap".to_string()));
    }
    Ok(())
}

fn check_point_feasible(lp: &LinearProgram, x: &[Rational]) -> Result<()> {
    for (j, b) in lp.bounds.iter().enumerate() {
        if let Some(l) = &b.lower {
            if &x[j] < l {
                return Err(Error::Internal(format!("variable {j} below its lower bound")));
            }
        }
        if let Some(u) = &b.upper {
            if &x[j] > u {
                return Err(Error::Internal(format!("variable {j} above its upper bound")));
            }
        }
    }
    for i in 0..lp.rows.len() {
        let v = row_value(lp, i, x);
        let ok = match lp.senses[i] {
            Sense::Le => v <= lp.rhs[i],
            Sense::Eq => v == lp.rhs[i],
            Sense::Ge => v >= lp.rhs[i],
        };
        if !ok {
            return Err(Error::Internal(format!("row {i} violated")));
        }
    }
    Ok(())
}

/// Check a Farkas certificate: with multipliers of the correct signs, the
/// aggregated row `w.x <= y.b` must be violated by every point of the
/// variable box (its exact minimum over the box exceeds `y.b`). An empty
/// box (crossed bounds) is accepted with any multipliers.
pub fn verify_farkas(lp: &LinearProgram, cert: &FarkasCertificate) -> Result<()> {
    lp.validate()?;
    let y = &cert.row_multipliers;
    if y.len() != lp.rows.len() {
        return Err(Error::LpDimension("multiplier count mismatch".to_string()));
    }
    if lp.bounds.iter().any(|b| matches!((&b.lower, &b.upper), (Some(l), Some(u)) if l > u)) {
        return Ok(());
    }
    for (i, yi) in y.iter().enumerate() {
        let ok = match lp.senses[i] {
            Sense::Le => *yi >= Rational::zero(),
            Sense::Ge => *yi <= Rational::zero(),
            Sense::Eq => true,
        };
        if !ok {
            return Err(Error::Internal(format!("farkas multiplier {i} has the wrong sign")));
        }
    }
    let mut box_min = Rational::zero();
    for j in 0..lp.num_vars() {
        let mut w = Rational::zero();
        for (yi, row) in y.iter().zip(&lp.rows) {
            w += yi * &row[j];
        }
        if w > Rational::zero() {
            match &lp.bounds[j].lower {
                Some(l) => box_min += &w * l,
                None => {
                    return Err(Error::Internal(format!(
                        "farkas aggregate positive on unbounded-below variable {j}"
                    )))
                }
            }
        } else if w < Rational::zero() {
            match &lp.bounds[j].upper {
                Some(u) => box_min += &w * u,
                None => {
                    return Err(Error::Internal(format!(
                        "farkas aggregate negative on unbounded-above variable {j}"
                    )))
                }
            }
        }
    }
    if box_min <= dot(y, &lp.rhs) {
        return Err(Error::Internal("farkas certificate does not separate".to_string()));
    }
    Ok(())
}

/// Check an unboundedness certificate: the point is feasible, the ray is a
/// recession direction of every row and bound, and the objective strictly
/// improves along it.
pub fn verify_unbounded(lp: &LinearProgram, cert: &UnboundedRay) -> Result<()> {
    lp.validate()?;
    if cert.point.len() != lp.num_vars() || cert.ray.len() != lp.num_vars() {
        return Err(Error::LpDimension("certificate shape mismatch".to_string()));
    }
    check_point_feasible(lp, &cert.point)?;
    for (j, b) in lp.bounds.iter().enumerate() {
        if b.lower.is_some() && cert.ray[j] < Rational::zero() {
            return Err(Error::Internal(format!("ray decreases bounded-below variable {j}")));
        }
        if b.upper.is_some() && cert.ray[j] > Rational::zero() {
            return Err(Error::Internal(format!("ray increases bounded-above variable {j}")));
        }
    }
    for i in 0..lp.rows.len() {
        let v = row_value(lp, i, &cert.ray);
        let ok = match lp.senses[i] {
            Sense::Le => v <= Rational::zero(),
            Sense::Eq => v.is_zero(),
            Sense::Ge => v >= Rational::zero(),
        };
        if !ok {
            return Err(Error::Internal(format!("ray is not a recession direction of row {i}")));
        }
    }
    if dot(&lp.objective, &cert.ray) <= Rational::zero() {
        return Err(Error::Internal("objective does not improve along the ray".to_string()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Transformation to the computational form  max c.x, A x <= b, x >= 0.
// ---------------------------------------------------------------------------

enum ColSource {
    /// x = shift + xhat
    Shifted {
        var: usize,
        shift: Rational,
    },
    /// x = offset - xhat (variable bounded above only)
    Reflected {
        var: usize,
        offset: Rational,
    },
    /// free variable split: x = xhat_pos - xhat_neg
    SplitPos {
        var: usize,
    },
    SplitNeg {
        var: usize,
    },
}

enum RowSource {
    /// Internal row = sign * original row (after variable substitution).
    Orig { row: usize, sign: i32 },
    /// Upper-bound row for a shifted variable; its multiplier folds into
    /// reduced costs and is dropped from the reported duals.
    UpperBound,
}

struct StdForm {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    cols: Vec<ColSource>,
    rows: Vec<RowSource>,
    obj_offset: Rational,
    orig_rows: usize,
    orig_vars: usize,
}

impl StdForm {
    fn build(lp: &LinearProgram) -> StdForm {
        let n = lp.num_vars();
        let mut cols = Vec::new();
        let mut c = Vec::new();
        let mut obj_offset = Rational::zero();
        // Extra rows for two-sided bounds: (internal column, width).
        let mut upper_rows: Vec<(usize, Rational)> = Vec::new();

        for j in 0..n {
            match (&lp.bounds[j].lower, &lp.bounds[j].upper) {
                (Some(l), up) => {
                    obj_offset += &lp.objective[j] * l;
                    c.push(lp.objective[j].clone());
                    cols.push(ColSource::Shifted { var: j, shift: l.clone() });
                    if let Some(u) = up {
                        upper_rows.push((cols.len() - 1, u - l));
                    }
                }
                (None, Some(u)) => {
                    obj_offset += &lp.objective[j] * u;
                    c.push(-lp.objective[j].clone());
                    cols.push(ColSource::Reflected { var: j, offset: u.clone() });
                }
                (None, None) => {
                    c.push(lp.objective[j].clone());
                    cols.push(ColSource::SplitPos { var: j });
                    c.push(-lp.objective[j].clone());
                    cols.push(ColSource::SplitNeg { var: j });
                }
            }
        }

        let translate_row = |coeffs: &[Rational]| -> (Vec<Rational>, Rational) {
            // Returns the internal coefficients and the rhs adjustment
            // incurred by the variable substitutions.
            let mut out = Vec::with_capacity(cols.len());
            let mut adjust = Rational::zero();
            for col in &cols {
                match col {
                    ColSource::Shifted { var, shift } => {
                        adjust += &coeffs[*var] * shift;
                        out.push(coeffs[*var].clone());
                    }
                    ColSource::Reflected { var, offset } => {
                        adjust += &coeffs[*var] * offset;
                        out.push(-coeffs[*var].clone());
                    }
                    ColSource::SplitPos { var } => out.push(coeffs[*var].clone()),
                    ColSource::SplitNeg { var } => out.push(-coeffs[*var].clone()),
                }
            }
            (out, adjust)
        };

        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut rows = Vec::new();
        for i in 0..lp.rows.len() {
            let (coeffs, adjust) = translate_row(&lp.rows[i]);
            let rhs = &lp.rhs[i] - &adjust;
            match lp.senses[i] {
                Sense::Le => {
                    a.push(coeffs);
                    b.push(rhs);
                    rows.push(RowSource::Orig { row: i, sign: 1 });
                }
                Sense::Ge => {
                    a.push(coeffs.iter().map(|x| -x).collect());
                    b.push(-rhs);
                    rows.push(RowSource::Orig { row: i, sign: -1 });
                }
                Sense::Eq => {
                    a.push(coeffs.iter().map(|x| -x).collect());
                    b.push(-&rhs);
                    rows.push(RowSource::Orig { row: i, sign: -1 });
                    a.push(coeffs);
                    b.push(rhs);
                    rows.push(RowSource::Orig { row: i, sign: 1 });
                }
            }
        }
        for (col, width) in upper_rows {
            let mut row = vec![Rational::zero(); cols.len()];
            row[col] = Rational::from_integer(1.into());
            a.push(row);
            b.push(width);
            rows.push(RowSource::UpperBound);
        }

        StdForm { a, b, c, cols, rows, obj_offset, orig_rows: lp.rows.len(), orig_vars: n }
    }

    fn map_point(&self, xhat: &[Rational]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.orig_vars];
        for (k, col) in self.cols.iter().enumerate() {
            match col {
                ColSource::Shifted { var, shift } => x[*var] = shift + &xhat[k],
                ColSource::Reflected { var, offset } => x[*var] = offset - &xhat[k],
                ColSource::SplitPos { var } => x[*var] += &xhat[k],
                ColSource::SplitNeg { var } => x[*var] -= &xhat[k],
            }
        }
        x
    }

    fn map_ray(&self, dhat: &[Rational]) -> Vec<Rational> {
        let mut d = vec![Rational::zero(); self.orig_vars];
        for (k, col) in self.cols.iter().enumerate() {
            match col {
                ColSource::Shifted { var, .. } => d[*var] = dhat[k].clone(),
                ColSource::Reflected { var, .. } => d[*var] = -dhat[k].clone(),
                ColSource::SplitPos { var } => d[*var] += &dhat[k],
                ColSource::SplitNeg { var } => d[*var] -= &dhat[k],
            }
        }
        d
    }

    fn map_duals(&self, yhat: &[Rational]) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.orig_rows];
        for (k, src) in self.rows.iter().enumerate() {
            match src {
                RowSource::Orig { row, sign } => {
                    if *sign >= 0 {
                        y[*row] += &yhat[k];
                    } else {
                        y[*row] -= &yhat[k];
                    }
                }
                RowSource::UpperBound => {}
            }
        }
        y
    }
}

// ---------------------------------------------------------------------------
// Simplex on  max c.x, A x <= b, x >= 0  (b of any sign).
// ---------------------------------------------------------------------------

enum StdOutcome {
    Optimal { x: Vec<Rational>, y: Vec<Rational>, value: Rational },
    Infeasible { y: Vec<Rational> },
    Unbounded { x: Vec<Rational>, d: Vec<Rational> },
}

struct Tableau {
    /// rows x columns, kept as B^{-1} * (original columns)
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    costs: Vec<Rational>,
    barred: Vec<bool>,
    num_cols: usize,
}

enum SimplexEnd {
    Optimal,
    Unbounded { entering: usize },
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.t[row][col].clone();
        debug_assert!(!pivot.is_zero());
        for x in self.t[row].iter_mut() {
            *x /= &pivot;
        }
        self.rhs[row] /= &pivot;
        for r in 0..self.t.len() {
            if r == row || self.t[r][col].is_zero() {
                continue;
            }
            let factor = self.t[r][col].clone();
            for c in 0..self.num_cols {
                let delta = &factor * &self.t[row][c];
                self.t[r][c] -= delta;
            }
            let delta = &factor * &self.rhs[row];
            self.rhs[r] -= delta;
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, col: usize) -> Rational {
        let mut r = self.costs[col].clone();
        for (row, &b) in self.basis.iter().enumerate() {
            if !self.costs[b].is_zero() && !self.t[row][col].is_zero() {
                r -= &self.costs[b] * &self.t[row][col];
            }
        }
        r
    }

    /// Bland's rule: entering = lowest-index improving column, leaving =
    /// min-ratio row breaking ties by lowest basic variable index.
    fn run(&mut self) -> SimplexEnd {
        loop {
            let mut entering = None;
            for j in 0..self.num_cols {
                if self.barred[j] || self.basis.contains(&j) {
                    continue;
                }
                if self.reduced_cost(j) > Rational::zero() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return SimplexEnd::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.t.len() {
                if self.t[r][j] <= Rational::zero() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.t[r][j];
                match &leave {
                    Some((lr, lratio)) => {
                        if ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                        {
                            leave = Some((r, ratio));
                        }
                    }
                    None => leave = Some((r, ratio)),
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return SimplexEnd::Unbounded { entering: j },
            }
        }
    }

    /// c_B B^{-1} e_i read off an identity-probe column.
    fn dual_component(&self, id_col: usize) -> Rational {
        let mut w = Rational::zero();
        for (row, &b) in self.basis.iter().enumerate() {
            if !self.costs[b].is_zero() {
                w += &self.costs[b] * &self.t[row][id_col];
            }
        }
        w
    }
}

fn solve_std(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<StdOutcome> {
    let m = a.len();
    let n = c.len();

    // sigma[i] = -1 marks rows negated so every equality-form rhs is >= 0;
    // those rows carry artificial variables.
    let sigma: Vec<i32> = b.iter().map(|x| if *x < Rational::zero() { -1 } else { 1 }).collect();
    let art_rows: Vec<usize> = (0..m).filter(|&i| sigma[i] < 0).collect();
    let num_art = art_rows.len();
    let num_cols = n + m + num_art;

    let mut t = vec![vec![Rational::zero(); num_cols]; m];
    let mut rhs = vec![Rational::zero(); m];
    let mut basis = vec![0usize; m];
    let mut art_col_of_row = vec![usize::MAX; m];
    let mut next_art = n + m;
    for i in 0..m {
        for j in 0..n {
            t[i][j] = if sigma[i] < 0 { -a[i][j].clone() } else { a[i][j].clone() };
        }
        t[i][n + i] = Rational::from_integer(if sigma[i] < 0 { (-1).into() } else { 1.into() });
        rhs[i] = if sigma[i] < 0 { -b[i].clone() } else { b[i].clone() };
        if sigma[i] < 0 {
            t[i][next_art] = Rational::from_integer(1.into());
            art_col_of_row[i] = next_art;
            basis[i] = next_art;
            next_art += 1;
        } else {
            basis[i] = n + i;
        }
    }

    let id_col_of_row: Vec<usize> =
        (0..m).map(|i| if sigma[i] < 0 { art_col_of_row[i] } else { n + i }).collect();

    let mut tab = Tableau {
        t,
        rhs,
        basis,
        costs: vec![Rational::zero(); num_cols],
        barred: vec![false; num_cols],
        num_cols,
    };

    if num_art > 0 {
        // Phase 1: maximize -sum(artificials).
        for i in &art_rows {
            tab.costs[art_col_of_row[*i]] = -Rational::from_integer(1.into());
        }
        match tab.run() {
            SimplexEnd::Optimal => {}
            SimplexEnd::Unbounded { .. } => {
                return Err(Error::Internal("phase 1 cannot be unbounded".into()))
            }
        }
        let attained: Rational =
            tab.basis.iter().enumerate().map(|(r, &bc)| &tab.costs[bc] * &tab.rhs[r]).sum();
        if attained < Rational::zero() {
            // Infeasible: map the phase-1 duals to a Farkas vector for the
            // <=-form (y_i = sigma_i * w_i, both signs folded here).
            let y: Vec<Rational> = (0..m)
                .map(|i| {
                    let w = tab.dual_component(id_col_of_row[i]);
                    if sigma[i] < 0 {
                        -w
                    } else {
                        w
                    }
                })
                .collect();
            return Ok(StdOutcome::Infeasible { y });
        }
        // Drive removable artificials out of the basis; the rest sit on
        // all-zero rows and stay inert.
        for r in 0..m {
            if tab.basis[r] < n + m {
                continue;
            }
            let col = (0..n + m).find(|&j| !tab.t[r][j].is_zero());
            if let Some(col) = col {
                tab.pivot(r, col);
            }
        }
        for i in &art_rows {
            tab.barred[art_col_of_row[*i]] = true;
        }
        tab.costs.iter_mut().for_each(|x| *x = Rational::zero());
    }

    // Phase 2.
    tab.costs[..n].clone_from_slice(&c[..n]);
    match tab.run() {
        SimplexEnd::Optimal => {
            let mut x = vec![Rational::zero(); n];
            for (r, &bc) in tab.basis.iter().enumerate() {
                if bc < n {
                    x[bc] = tab.rhs[r].clone();
                }
            }
            let y: Vec<Rational> = (0..m)
                .map(|i| {
                    let w = tab.dual_component(id_col_of_row[i]);
                    if sigma[i] < 0 {
                        -w
                    } else {
                        w
                    }
                })
                .collect();
            let value = dot(c, &x);
            Ok(StdOutcome::Optimal { x, y, value })
        }
        SimplexEnd::Unbounded { entering } => {
            let mut x = vec![Rational::zero(); n];
            let mut d = vec![Rational::zero(); n];
            for (r, &bc) in tab.basis.iter().enumerate() {
                if bc < n {
                    x[bc] = tab.rhs[r].clone();
                    d[bc] = -tab.t[r][entering].clone();
                }
            }
            if entering < n {
                d[entering] = Rational::from_integer(1.into());
            }
            Ok(StdOutcome::Unbounded { x, d })
        }
    }
}
