//! The JSON experiment configuration, command-line overrides, and the
//! resolution step that turns both into validated group/lattice/channel
//! objects ready to run.

use anyhow::{anyhow, bail, Context, Result};
use qdouble::group::{build_group, FiniteGroup, GroupSpec};
use qdouble::lattice::{
    open_ribbon, rect_loop, standard_ribbons, vertex_loop, Ribbon, TorusLattice,
};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

/// Experiments the driver knows how to run. Serde is the single parser,
/// so an unknown name in a config file fails at deserialization time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Experiment {
    #[serde(rename = "gsd")]
    Gsd,
    #[serde(rename = "smatrix")]
    Smatrix,
    #[serde(rename = "fusion")]
    Fusion,
    #[serde(rename = "decohere")]
    Decohere,
    #[serde(rename = "symmetry-audit")]
    SymmetryAudit,
    #[serde(rename = "anomaly")]
    Anomaly,
    #[serde(rename = "swssb")]
    Swssb,
    #[serde(rename = "cmi-profile")]
    CmiProfile,
    #[serde(rename = "extremal")]
    Extremal,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Gsd => "gsd",
            Experiment::Smatrix => "smatrix",
            Experiment::Fusion => "fusion",
            Experiment::Decohere => "decohere",
            Experiment::SymmetryAudit => "symmetry-audit",
            Experiment::Anomaly => "anomaly",
            Experiment::Swssb => "swssb",
            Experiment::CmiProfile => "cmi-profile",
            Experiment::Extremal => "extremal",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub lx: usize,
    pub ly: usize,
}

impl LatticeSpec {
    pub fn build(&self) -> Result<TorusLattice> {
        TorusLattice::new(self.lx, self.ly)
            .with_context(|| format!("lattice {}x{}", self.lx, self.ly))
    }

    pub fn parse(text: &str) -> Result<LatticeSpec> {
        let (lx, ly) = text
            .split_once(['x', 'X'])
            .ok_or_else(|| anyhow!("lattice must look like 2x2, got {text:?}"))?;
        Ok(LatticeSpec { lx: lx.trim().parse()?, ly: ly.trim().parse()? })
    }

    pub fn label(&self) -> String {
        format!("{}x{}", self.lx, self.ly)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Z,
    X,
}

/// Channel support: the keyword "all" or an explicit edge list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeSelection {
    Named(String),
    Listed(Vec<usize>),
}

impl Default for EdgeSelection {
    fn default() -> Self {
        EdgeSelection::Named("all".into())
    }
}

impl EdgeSelection {
    pub fn resolve(&self, lat: &TorusLattice) -> Result<Vec<usize>> {
        match self {
            EdgeSelection::Named(word) if word == "all" => Ok((0..lat.num_edges()).collect()),
            EdgeSelection::Named(word) => bail!("edge selection must be \"all\" or a list, got {word:?}"),
            EdgeSelection::Listed(edges) => {
                for &e in edges {
                    if e >= lat.num_edges() {
                        bail!("edge {e} out of range for a lattice with {} edges", lat.num_edges());
                    }
                }
                Ok(edges.clone())
            }
        }
    }

    pub fn parse(text: &str) -> Result<EdgeSelection> {
        if text.trim() == "all" {
            return Ok(EdgeSelection::Named("all".into()));
        }
        let edges = text
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| anyhow!("bad edge index {t:?}: {e}")))
            .collect::<Result<Vec<usize>>>()?;
        Ok(EdgeSelection::Listed(edges))
    }

    pub fn describe(&self) -> String {
        match self {
            EdgeSelection::Named(w) => w.clone(),
            EdgeSelection::Listed(edges) => {
                let parts: Vec<String> = edges.iter().map(|e| e.to_string()).collect();
                parts.join(",")
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    #[serde(default)]
    pub edges: EdgeSelection,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        ChannelSpec { kind: ChannelKind::Z, edges: EdgeSelection::default() }
    }
}

/// Which irrep/class pair the anomaly probe measures and on which ribbons.
/// `xi` is the closed detection loop, `eta` the open dressing ribbon.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnomalyParams {
    pub irrep: Option<String>,
    pub class: Option<String>,
    pub xi: Option<String>,
    pub eta: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwssbParams {
    pub class: Option<String>,
    pub eta: Option<String>,
}

/// Gate overrides. Anything left unset uses the library defaults.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub symmetry: Option<f64>,
    pub anomaly: Option<f64>,
    pub overlap: Option<f64>,
    pub cmi: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub schema_version: Option<u32>,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub lattice: Option<LatticeSpec>,
    pub experiments: Vec<Experiment>,
    #[serde(default)]
    pub channel: Option<ChannelSpec>,
    #[serde(default)]
    pub anomaly: Option<AnomalyParams>,
    #[serde(default)]
    pub swssb: Option<SwssbParams>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }
}

/// Command-line values that mirror config keys. On a genuine conflict the
/// config wins and the caller prints the returned warnings.
#[derive(Debug, Default)]
pub struct Overrides {
    pub group: Option<String>,
    pub lattice: Option<String>,
    pub channel: Option<String>,
    pub edges: Option<String>,
    pub output: Option<PathBuf>,
}

pub fn merge_overrides(cfg: &mut ExperimentConfig, ov: &Overrides) -> Result<Vec<String>> {
    let mut warnings = Vec::new();
    if let Some(name) = &ov.group {
        match &cfg.group {
            None => cfg.group = Some(GroupSpec::Builtin { builtin: name.clone() }),
            Some(GroupSpec::Builtin { builtin }) if builtin == name => {}
            Some(GroupSpec::Builtin { builtin }) => warnings.push(format!(
                "--group {name} conflicts with config group \"{builtin}\"; config wins"
            )),
            Some(GroupSpec::Table { .. }) => warnings.push(format!(
                "--group {name} conflicts with the table group in the config; config wins"
            )),
        }
    }
    if let Some(text) = &ov.lattice {
        let flag = LatticeSpec::parse(text)?;
        match &cfg.lattice {
            None => cfg.lattice = Some(flag),
            Some(have) if (have.lx, have.ly) == (flag.lx, flag.ly) => {}
            Some(have) => warnings.push(format!(
                "--lattice {} conflicts with config lattice {}; config wins",
                flag.label(),
                have.label()
            )),
        }
    }
    if let Some(text) = &ov.channel {
        let kind = parse_channel_kind(text)?;
        match &mut cfg.channel {
            None => cfg.channel = Some(ChannelSpec { kind, edges: EdgeSelection::default() }),
            Some(have) if have.kind == kind => {}
            Some(have) => warnings.push(format!(
                "--channel {text} conflicts with config channel kind {:?}; config wins",
                have.kind
            )),
        }
    }
    if let Some(text) = &ov.edges {
        let flag = EdgeSelection::parse(text)?;
        let channel = cfg.channel.get_or_insert_with(ChannelSpec::default);
        let same = channel.edges.describe() == flag.describe();
        let config_file_set_edges = !matches!(&channel.edges, EdgeSelection::Named(w) if w == "all");
        if config_file_set_edges && !same {
            warnings.push(format!(
                "--edges {text} conflicts with config edges {}; config wins",
                channel.edges.describe()
            ));
        } else {
            channel.edges = flag;
        }
    }
    if let Some(path) = &ov.output {
        match &cfg.output {
            None => cfg.output = Some(path.clone()),
            Some(have) if have == path => {}
            Some(have) => warnings.push(format!(
                "--output {} conflicts with config output {}; config wins",
                path.display(),
                have.display()
            )),
        }
    }
    Ok(warnings)
}

pub fn parse_channel_kind(text: &str) -> Result<ChannelKind> {
    match text.trim() {
        "z" | "Z" => Ok(ChannelKind::Z),
        "x" | "X" => Ok(ChannelKind::X),
        other => bail!("channel kind must be z or x, got {other:?}"),
    }
}

/// Everything an experiment needs, validated once up front.
pub struct Resolved {
    pub group: FiniteGroup,
    pub lattice_spec: LatticeSpec,
    pub lat: TorusLattice,
    pub experiments: Vec<Experiment>,
    pub channel: ChannelSpec,
    pub anomaly: AnomalyParams,
    pub swssb: SwssbParams,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
}

pub fn resolve(cfg: ExperimentConfig) -> Result<Resolved> {
    if let Some(v) = cfg.schema_version {
        if v != SCHEMA_VERSION {
            bail!("config schema_version {v} unsupported; this build writes version {SCHEMA_VERSION}");
        }
    }
    if cfg.experiments.is_empty() {
        bail!("no experiments requested");
    }
    let mut seen = Vec::new();
    for exp in &cfg.experiments {
        if seen.contains(exp) {
            bail!("experiment {:?} listed twice", exp.name());
        }
        seen.push(*exp);
    }
    let spec = cfg.group.ok_or_else(|| anyhow!("no group given (config key \"group\" or --group)"))?;
    let group = build_group(&spec).context("building group")?;
    let lattice_spec = cfg.lattice.unwrap_or(LatticeSpec { lx: 2, ly: 2 });
    let lat = lattice_spec.build()?;
    let channel = cfg.channel.unwrap_or_default();
    channel.edges.resolve(&lat)?;
    Ok(Resolved {
        group,
        lattice_spec,
        lat,
        experiments: cfg.experiments,
        channel,
        anomaly: cfg.anomaly.unwrap_or_default(),
        swssb: cfg.swssb.unwrap_or_default(),
        tolerances: cfg.tolerances.unwrap_or_default(),
        output: cfg.output,
    })
}

/// Ribbons addressable from a config: the two standard torus cycles, a
/// rectangle loop, a single-vertex dual loop, or an open site-to-site
/// ribbon.
///
/// Grammar: `xi_x`, `xi_y`, `rect(x,y,WxH)`, `vertex(v)`,
/// `open((x0,y0)-(x1,y1))`.
pub fn ribbon_by_name(lat: &TorusLattice, name: &str) -> Result<Ribbon> {
    let name = name.trim();
    match name {
        "xi_x" => return Ok(standard_ribbons(lat).xi_x),
        "xi_y" => return Ok(standard_ribbons(lat).xi_y),
        _ => {}
    }
    if let Some(args) = name.strip_prefix("rect(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            bail!("rect takes (x,y,WxH), got {name:?}");
        }
        let (x, y) = (parts[0].parse()?, parts[1].parse()?);
        let size = LatticeSpec::parse(parts[2])?;
        return Ok(rect_loop(lat, x, y, size.lx, size.ly));
    }
    if let Some(arg) = name.strip_prefix("vertex(").and_then(|s| s.strip_suffix(')')) {
        let v: usize = arg.trim().parse()?;
        if v >= lat.num_vertices() {
            bail!("vertex {v} out of range for {} vertices", lat.num_vertices());
        }
        return Ok(vertex_loop(lat, v));
    }
    if let Some(args) = name.strip_prefix("open(").and_then(|s| s.strip_suffix(')')) {
        let (from, to) = args
            .split_once('-')
            .ok_or_else(|| anyhow!("open takes ((x0,y0)-(x1,y1)), got {name:?}"))?;
        return Ok(open_ribbon(lat, parse_point(from)?, parse_point(to)?));
    }
    bail!("unknown ribbon {name:?}; know xi_x, xi_y, rect(x,y,WxH), vertex(v), open((x0,y0)-(x1,y1))");
}

fn parse_point(text: &str) -> Result<(usize, usize)> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| anyhow!("expected (x,y), got {text:?}"))?;
    let (x, y) = inner
        .split_once(',')
        .ok_or_else(|| anyhow!("expected (x,y), got {text:?}"))?;
    Ok((x.trim().parse()?, y.trim().parse()?))
}

/// Look up an irrep by label; with no label, the first nontrivial irrep.
pub fn pick_irrep(group: &FiniteGroup, label: Option<&str>) -> Result<qdouble::group::Irrep> {
    let irreps = group.irreps()?;
    match label {
        Some(want) => irreps
            .iter()
            .find(|ir| ir.label == want)
            .cloned()
            .ok_or_else(|| {
                let known: Vec<&str> = irreps.iter().map(|ir| ir.label.as_str()).collect();
                anyhow!("unknown irrep {want:?} for {}; know {known:?}", group.name())
            }),
        None => irreps
            .into_iter()
            .nth(1)
            .ok_or_else(|| anyhow!("{} has only the trivial irrep; pick nothing to probe", group.name())),
    }
}

/// Look up a conjugacy class by the label of any member; with no label,
/// the first nontrivial class.
pub fn pick_class(
    group: &FiniteGroup,
    label: Option<&str>,
) -> Result<qdouble::group::ConjugacyClass> {
    let classes = group.conjugacy_data();
    match label {
        Some(want) => {
            let want = want.trim().trim_start_matches('[').trim_end_matches(']');
            classes
                .iter()
                .find(|c| c.members.iter().any(|&m| group.label(m) == want))
                .cloned()
                .ok_or_else(|| {
                    let known: Vec<&str> =
                        classes.iter().map(|c| group.label(c.representative)).collect();
                    anyhow!("no class contains {want:?} in {}; representatives {known:?}", group.name())
                })
        }
        None => classes
            .into_iter()
            .nth(1)
            .ok_or_else(|| anyhow!("{} has only the identity class", group.name())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_experiment_names_are_rejected_at_parse() {
        let err = serde_json::from_str::<ExperimentConfig>(
            r#"{"group": {"builtin": "S3"}, "experiments": ["gsd", "teleport"]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("unknown variant"), "{err}");
    }

    #[test]
    fn kebab_names_round_trip() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"group": {"builtin": "Z2"}, "experiments": ["symmetry-audit", "cmi-profile"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.experiments, vec![Experiment::SymmetryAudit, Experiment::CmiProfile]);
        assert_eq!(cfg.experiments[0].name(), "symmetry-audit");
    }

    #[test]
    fn config_wins_over_flags_with_a_warning() {
        let mut cfg: ExperimentConfig = serde_json::from_str(
            r#"{"group": {"builtin": "S3"}, "lattice": {"lx": 2, "ly": 2}, "experiments": ["gsd"]}"#,
        )
        .unwrap();
        let ov = Overrides {
            group: Some("D4".into()),
            lattice: Some("3x3".into()),
            ..Overrides::default()
        };
        let warnings = merge_overrides(&mut cfg, &ov).unwrap();
        assert_eq!(warnings.len(), 2);
        assert!(warnings[0].contains("config wins"));
        match cfg.group {
            Some(GroupSpec::Builtin { ref builtin }) => assert_eq!(builtin, "S3"),
            _ => panic!("group replaced"),
        }
        assert_eq!(cfg.lattice.unwrap().lx, 2);
    }

    #[test]
    fn flags_fill_unset_keys_silently() {
        let mut cfg: ExperimentConfig =
            serde_json::from_str(r#"{"experiments": ["gsd"]}"#).unwrap();
        let ov = Overrides {
            group: Some("Z3".into()),
            lattice: Some("3x2".into()),
            channel: Some("x".into()),
            edges: Some("0,1".into()),
            ..Overrides::default()
        };
        let warnings = merge_overrides(&mut cfg, &ov).unwrap();
        assert!(warnings.is_empty(), "{warnings:?}");
        let resolved = resolve(cfg).unwrap();
        assert_eq!(resolved.group.name(), "Z3");
        assert_eq!((resolved.lattice_spec.lx, resolved.lattice_spec.ly), (3, 2));
        assert_eq!(resolved.channel.kind, ChannelKind::X);
        assert_eq!(resolved.channel.edges.resolve(&resolved.lat).unwrap(), vec![0, 1]);
    }

    #[test]
    fn ribbon_grammar_covers_the_standard_shapes() {
        let lat = TorusLattice::new(3, 3).unwrap();
        for name in ["xi_x", "xi_y", "rect(1,1,1x1)", "vertex(4)", "open((0,0)-(1,1))"] {
            ribbon_by_name(&lat, name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(ribbon_by_name(&lat, "rect(1,1,1x1)").unwrap().is_closed());
        assert!(!ribbon_by_name(&lat, "open((0,0)-(1,1))").unwrap().is_closed());
        assert!(ribbon_by_name(&lat, "mobius").is_err());
    }

    #[test]
    fn class_lookup_accepts_bracketed_member_labels() {
        let group = FiniteGroup::s3();
        let by_member = pick_class(&group, Some("tc")).unwrap();
        let by_bracket = pick_class(&group, Some("[t]")).unwrap();
        assert_eq!(by_member.representative, by_bracket.representative);
        assert_eq!(by_member.size(), 3);
        let default = pick_class(&group, None).unwrap();
        assert!(default.representative != 0);
    }
}
