//! Canonical textual documents for games, profiles, certificates, and
//! reports.
//!
//! All documents are JSON with a fixed field order (struct declaration
//! order), rationals as reduced strings (`"p/q"`, `"-p/q"`, `"n"`), no
//! insignificant whitespace, and a trailing newline. Parsing is strict:
//! unknown fields, malformed rationals, and dimension mismatches are
//! errors, with positions in the message where available.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile, PureProfile};
use crate::minmax::{MinmaxBounds, PromiseVerdict};
use crate::poly::{Poly, SignProof};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reduction::{ReducedGame, TheoremReport};
use crate::refinement::{
    CertifyFailure, ConditionalReplyReport, Dominance, DominanceReport, OracleConclusion,
    OracleVerdict, PerfectionCertificate, TwoPlayerPerfection,
};

/// Serialize a typed document in canonical form.
fn emit<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("documents always serialize");
    s.push('\n');
    s
}

fn rationals(row: &[Rational]) -> Vec<String> {
    row.iter().map(format_rational).collect()
}

fn parse_row(row: &[String], what: &str) -> Result<Vec<Rational>> {
    row.iter().map(|s| parse_rational(s).map_err(|e| position_hint(e, what))).collect()
}

fn position_hint(err: Error, what: &str) -> Error {
    match err {
        Error::InvalidRational { literal, reason } => {
            Error::InvalidRational { literal, reason: format!("{reason} (in {what})") }
        }
        other => other,
    }
}

// ---------------------------------------------------------------------------
// Game documents.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct GameMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    /// Per-player ⊥ index for gadget games produced by `reduce`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bot_index: Option<Vec<usize>>,
    /// Threshold recorded by `reduce`, as a rational string.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGameDoc {
    players: usize,
    actions: Vec<Vec<String>>,
    payoffs: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<GameMetadata>,
}

#[derive(Debug, Clone)]
pub struct GameDocument {
    pub game: Game,
    pub metadata: Option<GameMetadata>,
}

impl GameDocument {
    pub fn new(game: Game, metadata: Option<GameMetadata>) -> Self {
        GameDocument { game, metadata }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawGameDoc = serde_json::from_str(text)?;
        if raw.players != raw.actions.len() {
            return Err(Error::InvalidDocument(format!(
                "players is {} but actions lists {} players",
                raw.players,
                raw.actions.len()
            )));
        }
        let dims: Vec<usize> = raw.actions.iter().map(|a| a.len()).collect();
        let mut flat = Vec::new();
        flatten_payoffs(&raw.payoffs, &dims, raw.players, &mut String::new(), &mut flat)?;
        let game = Game::new(raw.actions, flat)?;
        if let Some(meta) = &raw.metadata {
            if let Some(bots) = &meta.bot_index {
                if bots.len() != game.player_count() {
                    return Err(Error::InvalidDocument(format!(
                        "metadata.botIndex has {} entries for {} players",
                        bots.len(),
                        game.player_count()
                    )));
                }
                for (p, &b) in bots.iter().enumerate() {
                    if b >= game.action_count(p) {
                        return Err(Error::InvalidDocument(format!(
                            "metadata.botIndex[{p}] = {b} is out of range"
                        )));
                    }
                }
            }
            if let Some(r) = &meta.r {
                parse_rational(r).map_err(|e| position_hint(e, "metadata.r"))?;
            }
        }
        Ok(GameDocument { game, metadata: raw.metadata })
    }

    pub fn to_canonical_string(&self) -> String {
        emit(&raw_game(&self.game, self.metadata.clone()))
    }
}

fn raw_game(game: &Game, metadata: Option<GameMetadata>) -> RawGameDoc {
    RawGameDoc {
        players: game.player_count(),
        actions: game.all_action_labels().to_vec(),
        payoffs: nest_payoffs(game, &mut vec![0; game.player_count()], 0),
        metadata,
    }
}

/// Nested payoff tensor: one array level per player, innermost entries
/// are per-player rational strings.
fn nest_payoffs(game: &Game, cell: &mut Vec<usize>, depth: usize) -> Value {
    if depth == game.player_count() {
        let entries: Vec<Value> = (0..game.player_count())
            .map(|p| Value::String(format_rational(game.payoff(cell, p))))
            .collect();
        return Value::Array(entries);
    }
    let mut out = Vec::with_capacity(game.action_count(depth));
    for a in 0..game.action_count(depth) {
        cell[depth] = a;
        out.push(nest_payoffs(game, cell, depth + 1));
    }
    Value::Array(out)
}

fn flatten_payoffs(
    v: &Value,
    dims: &[usize],
    players: usize,
    path: &mut String,
    flat: &mut Vec<Rational>,
) -> Result<()> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidDocument(format!("payoffs{path}: expected an array")))?;
    let depth = path.matches('[').count();
    if depth == dims.len() {
        if arr.len() != players {
            return Err(Error::InvalidDocument(format!(
                "payoffs{path}: cell has {} entries for {players} players",
                arr.len()
            )));
        }
        for (i, e) in arr.iter().enumerate() {
            let s = e.as_str().ok_or_else(|| {
                Error::InvalidDocument(format!("payoffs{path}[{i}]: payoffs are rational strings"))
            })?;
            flat.push(
                parse_rational(s).map_err(|e| position_hint(e, &format!("payoffs{path}[{i}]")))?,
            );
        }
        return Ok(());
    }
    if arr.len() != dims[depth] {
        return Err(Error::InvalidDocument(format!(
            "payoffs{path}: expected {} entries, found {}",
            dims[depth],
            arr.len()
        )));
    }
    for (i, e) in arr.iter().enumerate() {
        let len = path.len();
        path.push_str(&format!("[{i}]"));
        flatten_payoffs(e, dims, players, path, flat)?;
        path.truncate(len);
    }
    Ok(())
}

/// The canonical G′ document: "_bot" labels appended, ⊥ indices and the
/// threshold recorded in metadata.
pub fn reduced_game_document(rg: &ReducedGame, source_name: Option<String>) -> GameDocument {
    GameDocument::new(
        rg.gprime.clone(),
        Some(GameMetadata {
            name: source_name,
            provenance: Some("reduce".to_string()),
            bot_index: Some(rg.bot_index.clone()),
            r: Some(format_rational(&rg.r)),
        }),
    )
}

// ---------------------------------------------------------------------------
// Profile documents.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionRef {
    Index(usize),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
pub enum ProfileDocument {
    Mixed { rows: Vec<Vec<String>> },
    Pure { actions: Vec<ActionRef> },
}

impl ProfileDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_canonical_string(&self) -> String {
        emit(self)
    }

    pub fn from_mixed(profile: &MixedProfile) -> Self {
        ProfileDocument::Mixed { rows: profile.rows().iter().map(|r| rationals(r)).collect() }
    }

    pub fn from_pure(profile: &PureProfile) -> Self {
        ProfileDocument::Pure {
            actions: profile.actions().iter().map(|&a| ActionRef::Index(a)).collect(),
        }
    }

    /// Resolve to a mixed profile over `game` (pure profiles become point
    /// masses; labels are looked up per player).
    pub fn resolve(&self, game: &Game) -> Result<MixedProfile> {
        match self {
            ProfileDocument::Mixed { rows } => {
                if rows.len() != game.player_count() {
                    return Err(Error::ShapeMismatch(format!(
                        "profile has {} rows for {} players",
                        rows.len(),
                        game.player_count()
                    )));
                }
                let mut parsed = Vec::with_capacity(rows.len());
                for (p, row) in rows.iter().enumerate() {
                    if row.len() != game.action_count(p) {
                        return Err(Error::ShapeMismatch(format!(
                            "player {p} row has {} entries for {} actions",
                            row.len(),
                            game.action_count(p)
                        )));
                    }
                    parsed.push(parse_row(row, &format!("rows[{p}]"))?);
                }
                MixedProfile::new(parsed)
            }
            ProfileDocument::Pure { .. } => Ok(self.resolve_pure(game)?.to_mixed(game)?),
        }
    }

    /// Resolve to a pure profile; mixed documents are rejected.
    pub fn resolve_pure(&self, game: &Game) -> Result<PureProfile> {
        let ProfileDocument::Pure { actions } = self else {
            return Err(Error::InvalidDocument("expected a pure profile document".to_string()));
        };
        if actions.len() != game.player_count() {
            return Err(Error::ShapeMismatch(format!(
                "profile names {} players, game has {}",
                actions.len(),
                game.player_count()
            )));
        }
        let mut indices = Vec::with_capacity(actions.len());
        for (p, a) in actions.iter().enumerate() {
            let idx = match a {
                ActionRef::Index(i) => *i,
                ActionRef::Label(l) => {
                    game.action_labels(p).iter().position(|x| x == l).ok_or_else(|| {
                        Error::InvalidDocument(format!("player {p} has no action labeled {l:?}"))
                    })?
                }
            };
            indices.push(idx);
        }
        let profile = PureProfile::new(indices);
        profile.validate(game)?;
        Ok(profile)
    }
}

// ---------------------------------------------------------------------------
// Certificate documents.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SignProofDoc {
    pub bound: String,
    pub strict: bool,
    pub vanishing_order: usize,
    pub lowest_coeff: String,
    pub root_cells: Vec<(String, String)>,
    pub gap_samples: Vec<(String, String)>,
}

impl SignProofDoc {
    fn from_proof(p: &SignProof) -> Self {
        let pair = |(a, b): &(Rational, Rational)| (format_rational(a), format_rational(b));
        SignProofDoc {
            bound: format_rational(&p.bound),
            strict: p.strict,
            vanishing_order: p.vanishing_order,
            lowest_coeff: format_rational(&p.lowest_coeff),
            root_cells: p.root_cells.iter().map(pair).collect(),
            gap_samples: p.gap_samples.iter().map(pair).collect(),
        }
    }

    fn to_proof(&self) -> Result<SignProof> {
        let pair = |(a, b): &(String, String), what: &str| -> Result<(Rational, Rational)> {
            Ok((
                parse_rational(a).map_err(|e| position_hint(e, what))?,
                parse_rational(b).map_err(|e| position_hint(e, what))?,
            ))
        };
        Ok(SignProof {
            bound: parse_rational(&self.bound).map_err(|e| position_hint(e, "bound"))?,
            strict: self.strict,
            vanishing_order: self.vanishing_order,
            lowest_coeff: parse_rational(&self.lowest_coeff)
                .map_err(|e| position_hint(e, "lowestCoeff"))?,
            root_cells: self
                .root_cells
                .iter()
                .map(|c| pair(c, "rootCells"))
                .collect::<Result<_>>()?,
            gap_samples: self
                .gap_samples
                .iter()
                .map(|c| pair(c, "gapSamples"))
                .collect::<Result<_>>()?,
        })
    }
}

/// Self-contained perfection certificate: together with the game document
/// it contains everything `verify_certificate` needs — no search is rerun.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CertificateDocument {
    pub mu: Vec<usize>,
    pub tau: Vec<Vec<String>>,
    pub uniform: Vec<Vec<String>>,
    pub k0: u64,
    /// Ascending coefficient lists, one polynomial per player and action.
    pub action_polynomials: Vec<Vec<Vec<String>>>,
    pub sign_proofs: Vec<Vec<SignProofDoc>>,
}

impl CertificateDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_canonical_string(&self) -> String {
        emit(self)
    }

    pub fn from_certificate(cert: &PerfectionCertificate) -> Self {
        CertificateDocument {
            mu: cert.mu.actions().to_vec(),
            tau: cert.tau.rows().iter().map(|r| rationals(r)).collect(),
            uniform: cert.uniform.rows().iter().map(|r| rationals(r)).collect(),
            k0: cert.k0,
            action_polynomials: cert
                .action_polynomials
                .iter()
                .map(|row| row.iter().map(|p| rationals(p.coeffs())).collect())
                .collect(),
            sign_proofs: cert
                .sign_proofs
                .iter()
                .map(|row| row.iter().map(SignProofDoc::from_proof).collect())
                .collect(),
        }
    }

    pub fn to_certificate(&self) -> Result<PerfectionCertificate> {
        let rows = |rows: &[Vec<String>], what: &str| -> Result<Vec<Vec<Rational>>> {
            rows.iter().map(|r| parse_row(r, what)).collect()
        };
        Ok(PerfectionCertificate {
            mu: PureProfile::new(self.mu.clone()),
            tau: MixedProfile::new(rows(&self.tau, "tau")?)?,
            uniform: MixedProfile::new(rows(&self.uniform, "uniform")?)?,
            k0: self.k0,
            action_polynomials: self
                .action_polynomials
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|coeffs| {
                            Ok(Poly::from_coeffs(parse_row(coeffs, "actionPolynomials")?))
                        })
                        .collect()
                })
                .collect::<Result<_>>()?,
            sign_proofs: self
                .sign_proofs
                .iter()
                .map(|row| row.iter().map(SignProofDoc::to_proof).collect())
                .collect::<Result<_>>()?,
        })
    }
}

// ---------------------------------------------------------------------------
// Report documents (serialize-only).
// ---------------------------------------------------------------------------

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DeviationDoc {
    player: usize,
    action: usize,
    gain: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct NashDoc {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<DeviationDoc>,
}

pub fn nash_report_doc(verdict: &crate::game::NashVerdict) -> String {
    use crate::game::NashVerdict;
    let doc = match verdict {
        NashVerdict::Yes => NashDoc { verdict: "yes", deviation: None },
        NashVerdict::No(d) => NashDoc {
            verdict: "no",
            deviation: Some(DeviationDoc {
                player: d.player,
                action: d.action,
                gain: format_rational(&d.gain),
            }),
        },
    };
    emit(&doc)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DominanceDoc {
    player: usize,
    action: usize,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    dominating_mixture: Option<Vec<String>>,
}

fn dominance_doc(report: &DominanceReport) -> DominanceDoc {
    DominanceDoc {
        player: report.player,
        action: report.action,
        verdict: match report.verdict {
            Dominance::Undominated => "undominated",
            Dominance::WeaklyDominated => "weakly-dominated",
        },
        dominating_mixture: report.dominating_mixture.as_deref().map(rationals),
    }
}

pub fn dominance_report_doc(report: &DominanceReport) -> String {
    emit(&dominance_doc(report))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Perfect2pDoc {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    dominated_support_action: Option<DominanceDoc>,
}

pub fn perfect2p_report_doc(outcome: &TwoPlayerPerfection) -> String {
    let doc = match outcome {
        TwoPlayerPerfection::Perfect => {
            Perfect2pDoc { verdict: "perfect", dominated_support_action: None }
        }
        TwoPlayerPerfection::NotPerfect(report) => Perfect2pDoc {
            verdict: "not-perfect",
            dominated_support_action: Some(dominance_doc(report)),
        },
    };
    emit(&doc)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct UpperWitnessDoc {
    tau2: Vec<String>,
    tau3: Vec<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct LowerCertificateDoc {
    strategy: Vec<String>,
    rho: Vec<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MinmaxDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<&'static str>,
    lower: String,
    upper: String,
    upper_witness: UpperWitnessDoc,
    lower_certificate: LowerCertificateDoc,
}

pub fn verdict_str(verdict: PromiseVerdict) -> &'static str {
    match verdict {
        PromiseVerdict::Yes => "yes",
        PromiseVerdict::No => "no",
        PromiseVerdict::Ambiguous => "ambiguous",
    }
}

pub fn minmax_report_doc(
    bounds: &MinmaxBounds,
    classification: Option<(&Rational, PromiseVerdict)>,
) -> String {
    let doc = MinmaxDoc {
        r: classification.map(|(r, _)| format_rational(r)),
        verdict: classification.map(|(_, v)| verdict_str(v)),
        lower: format_rational(&bounds.lower),
        upper: format_rational(&bounds.upper),
        upper_witness: UpperWitnessDoc {
            tau2: rationals(&bounds.upper_witness.tau2),
            tau3: rationals(&bounds.upper_witness.tau3),
        },
        lower_certificate: LowerCertificateDoc {
            strategy: rationals(&bounds.lower_certificate.strategy),
            rho: rationals(&bounds.lower_certificate.rho),
        },
    };
    emit(&doc)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct OracleDoc {
    levels_checked: u32,
    witnesses: Vec<Vec<Vec<String>>>,
    verdict: String,
}

pub fn oracle_report_doc(verdict: &OracleVerdict) -> String {
    let doc = OracleDoc {
        levels_checked: verdict.levels_checked,
        witnesses: verdict
            .witnesses
            .iter()
            .map(|w| w.rows().iter().map(|r| rationals(r)).collect())
            .collect(),
        verdict: match &verdict.conclusion {
            OracleConclusion::Supported => "supported".to_string(),
            OracleConclusion::RefutedAtLevel(j) => format!("refuted-at-level-{j}"),
        },
    };
    emit(&doc)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ConditionalDoc {
    r: String,
    best_action: usize,
    conditional_value: String,
    value: String,
    bot_beaten: bool,
}

fn conditional_doc(report: &ConditionalReplyReport) -> ConditionalDoc {
    ConditionalDoc {
        r: format_rational(&report.r),
        best_action: report.best_action,
        conditional_value: format_rational(&report.conditional_value),
        value: format_rational(&report.value),
        bot_beaten: report.bot_beaten,
    }
}

pub fn conditional_report_doc(report: &ConditionalReplyReport) -> String {
    emit(&conditional_doc(report))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CertifyFailureDoc {
    player: usize,
    action: usize,
    interval: (String, String),
}

pub fn certify_failure_doc(failure: &CertifyFailure) -> String {
    emit(&CertifyFailureDoc {
        player: failure.player,
        action: failure.action,
        interval: (format_rational(&failure.interval.0), format_rational(&failure.interval.1)),
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct InstanceDoc {
    game: RawGameDoc,
    r: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TheoremDoc {
    instance: InstanceDoc,
    verdict_minmax: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    perfection_positive: Option<CertificateDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    perfection_negative: Option<Vec<ConditionalDoc>>,
    consistent: bool,
}

pub fn theorem_report_doc(report: &TheoremReport) -> String {
    let doc = TheoremDoc {
        instance: InstanceDoc {
            game: raw_game(&report.instance.game, None),
            r: format_rational(&report.instance.r),
        },
        verdict_minmax: verdict_str(report.verdict_minmax),
        perfection_positive: report
            .perfection_positive
            .as_ref()
            .map(CertificateDocument::from_certificate),
        perfection_negative: report
            .perfection_negative
            .as_ref()
            .map(|list| list.iter().map(conditional_doc).collect()),
        consistent: report.consistent,
    };
    emit(&doc)
}
