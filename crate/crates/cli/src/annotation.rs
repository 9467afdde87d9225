//! TOML annotation files.
//!
//! An annotation file names a program, picks a proof rule, and supplies the
//! expectations and bounds the rule needs. Loading validates the file shape
//! and the per-rule required fields *before* any checking starts, so a
//! malformed file is always a usage error (exit 3), never a rejection.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use wpcert_core::algebra::{eval, ExtReal};
use wpcert_core::certificates::{AnnotationSet, AstAssertion, MciverVariant, OstRule};
use wpcert_core::syntax::{parse_domain, parse_expectation, parse_program, Rat, State};
use wpcert_core::transformers::TransformerKind;

/// Which proof rule the file asks to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    ParkUpper,
    Ost(OstRule),
    Mciver(MciverVariant),
    ErtLower,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::ParkUpper => "park-upper",
            Rule::Ost(r) => r.name(),
            Rule::Mciver(v) => v.name(),
            Rule::ErtLower => "ert-lower",
        }
    }

    fn from_name(s: &str) -> Option<Rule> {
        Some(match s {
            "park-upper" => Rule::ParkUpper,
            "ost-a" => Rule::Ost(OstRule::A),
            "ost-b" => Rule::Ost(OstRule::B),
            "ost-c" => Rule::Ost(OstRule::C),
            "mciver-1" => Rule::Mciver(MciverVariant::One),
            "mciver-2" => Rule::Mciver(MciverVariant::Two),
            "mciver-3" => Rule::Mciver(MciverVariant::Three),
            "mciver-gen" => Rule::Mciver(MciverVariant::Gen),
            "ert-lower" => Rule::ErtLower,
            _ => return None,
        })
    }
}

const RULE_NAMES: &str =
    "park-upper, ost-a, ost-b, ost-c, mciver-1, mciver-2, mciver-3, mciver-gen, ert-lower";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnotationFile {
    program: ProgramSection,
    check: CheckSection,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProgramSection {
    /// Program source, relative to the annotation file's directory.
    path: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckSection {
    rule: String,
    kind: Option<String>,
    post: String,
    invariant: String,
    domain: String,
    cdb_bound: Option<String>,
    looping_bound: Option<String>,
    bound_on_f: Option<String>,
    epsilon: Option<String>,
    g: Option<String>,
    ast: Option<String>,
    truncation: Option<String>,
}

/// A fully parsed and pre-validated check request.
#[derive(Debug)]
pub struct LoadedCheck {
    pub rule: Rule,
    pub kind: TransformerKind,
    pub ann: AnnotationSet,
}

/// Parse a field that must be a nonnegative rational constant (e.g. `"7/2"`,
/// `"3.5"`, `"1024"`).
fn parse_rat(field: &str, text: &str) -> Result<Rat> {
    let expr =
        parse_expectation(text).with_context(|| format!("in annotation field `{field}`"))?;
    let value = eval(&expr, &State::new())
        .map_err(|e| anyhow!("annotation field `{field}` must be a constant: {e}"))?;
    match value {
        ExtReal::Rat(r) => Ok(r),
        other => bail!("annotation field `{field}` must be a finite rational constant, got {other}"),
    }
}

/// The transformer kind each rule bounds, and whether the file may override.
fn resolve_kind(rule: Rule, kind: Option<&str>) -> Result<TransformerKind> {
    let requested = match kind {
        None => None,
        Some("wp") => Some(TransformerKind::Wp),
        Some("ert") => Some(TransformerKind::Ert),
        Some(other) => bail!("unknown kind `{other}` (expected wp or ert)"),
    };
    match rule {
        // An upper-bound invariant works for either transformer.
        Rule::ParkUpper => Ok(requested.unwrap_or(TransformerKind::Wp)),
        Rule::Ost(_) | Rule::Mciver(_) => match requested {
            None | Some(TransformerKind::Wp) => Ok(TransformerKind::Wp),
            Some(TransformerKind::Ert) => {
                bail!("rule `{}` certifies wp lower bounds; kind must be \"wp\"", rule.name())
            }
        },
        Rule::ErtLower => match requested {
            None | Some(TransformerKind::Ert) => Ok(TransformerKind::Ert),
            Some(TransformerKind::Wp) => {
                bail!("rule `ert-lower` certifies ert lower bounds; kind must be \"ert\"")
            }
        },
    }
}

/// Fields each rule cannot run without (beyond post/invariant/domain).
fn required_fields(rule: Rule) -> &'static [&'static str] {
    match rule {
        Rule::ParkUpper => &[],
        Rule::Ost(OstRule::A) => &["ast", "looping_bound"],
        Rule::Ost(OstRule::B) => &["ast", "cdb_bound"],
        Rule::Ost(OstRule::C) => &["ast", "bound_on_f"],
        Rule::Mciver(MciverVariant::One) => &["bound_on_f"],
        Rule::Mciver(MciverVariant::Two) => &["bound_on_f", "g"],
        Rule::Mciver(MciverVariant::Three) => &["bound_on_f", "epsilon"],
        Rule::Mciver(MciverVariant::Gen) => &["bound_on_f", "epsilon", "g"],
        Rule::ErtLower => &["cdb_bound"],
    }
}

fn check_required(rule: Rule, check: &CheckSection) -> Result<()> {
    let present = |field: &str| match field {
        "ast" => check.ast.is_some(),
        "looping_bound" => check.looping_bound.is_some(),
        "cdb_bound" => check.cdb_bound.is_some(),
        "bound_on_f" => check.bound_on_f.is_some(),
        "epsilon" => check.epsilon.is_some(),
        "g" => check.g.is_some(),
        _ => unreachable!("unknown required field"),
    };
    let missing: Vec<&str> =
        required_fields(rule).iter().copied().filter(|f| !present(f)).collect();
    if !missing.is_empty() {
        bail!(
            "rule `{}` requires annotation field(s): {}",
            rule.name(),
            missing.join(", ")
        );
    }
    Ok(())
}

/// Minimum termination assertion a rule insists on up front.
fn check_ast_rank(rule: Rule, ast: AstAssertion) -> Result<()> {
    let need = match rule {
        Rule::Ost(OstRule::A) | Rule::Ost(OstRule::B) => AstAssertion::BodyAst,
        Rule::Ost(OstRule::C) => AstAssertion::LoopAst,
        _ => return Ok(()),
    };
    if ast < need {
        bail!(
            "rule `{}` needs a termination assertion of at least `{}` in field `ast`",
            rule.name(),
            match need {
                AstAssertion::BodyAst => "body-ast",
                AstAssertion::LoopAst => "loop-ast",
                _ => unreachable!(),
            }
        );
    }
    Ok(())
}

/// Load and validate an annotation file, returning everything `check` needs.
pub fn load(path: &Path) -> Result<LoadedCheck> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read annotation file `{}`", path.display()))?;
    let file: AnnotationFile = toml::from_str(&text)
        .with_context(|| format!("invalid annotation file `{}`", path.display()))?;

    let rule = Rule::from_name(&file.check.rule).ok_or_else(|| {
        anyhow!("unknown rule `{}` (expected one of {RULE_NAMES})", file.check.rule)
    })?;
    let kind = resolve_kind(rule, file.check.kind.as_deref())?;
    check_required(rule, &file.check)?;

    let base = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let program_path = base.join(&file.program.path);
    let src = std::fs::read_to_string(&program_path)
        .with_context(|| format!("cannot read program `{}`", program_path.display()))?;
    let prog = parse_program(&src)
        .with_context(|| format!("parse error in `{}`", program_path.display()))?;

    let post = parse_expectation(&file.check.post).context("in annotation field `post`")?;
    let invariant =
        parse_expectation(&file.check.invariant).context("in annotation field `invariant`")?;
    let domain = parse_domain(&file.check.domain).context("in annotation field `domain`")?;

    let mut ann = AnnotationSet::new(prog, post, invariant, domain);
    if let Some(t) = &file.check.cdb_bound {
        ann.cdb_bound = Some(parse_rat("cdb_bound", t)?);
    }
    if let Some(t) = &file.check.looping_bound {
        ann.looping_bound =
            Some(parse_expectation(t).context("in annotation field `looping_bound`")?);
    }
    if let Some(t) = &file.check.bound_on_f {
        ann.bound_on_f = Some(parse_rat("bound_on_f", t)?);
    }
    if let Some(t) = &file.check.epsilon {
        ann.epsilon = Some(parse_rat("epsilon", t)?);
    }
    if let Some(t) = &file.check.g {
        ann.g = Some(parse_expectation(t).context("in annotation field `g`")?);
    }
    if let Some(t) = &file.check.ast {
        ann.ast = t.parse::<AstAssertion>().map_err(|e| anyhow!("in annotation field `ast`: {e}"))?;
    }
    check_ast_rank(rule, ann.ast)?;
    if let Some(t) = &file.check.truncation {
        ann.truncation = Some(parse_domain(t).context("in annotation field `truncation`")?);
    }

    Ok(LoadedCheck { rule, kind, ann })
}
