//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a checked statement failed, 2 invalid input,
//! 3 a size bound was exceeded.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::admissibility::{wallman_equivalent_forms, AdmissibilityReport};
use crate::error::{NearnessError, Result};
use crate::files::{names_of, AnyFile, InstanceFile, SpaceFile};
use crate::frames::FiniteFrame;
use crate::nearness::NearnessInstance;
use crate::poset::{Mask, Poset};
use crate::props::{check_frame, check_instance, check_space, coinitial_sample, Suite};
use crate::proximity::Priming;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "nearness", version, about = "Finite nearness instances, spectra and admissibility")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PrimingArg {
    StageLocal,
    Original,
}

impl From<PrimingArg> for Priming {
    fn from(p: PrimingArg) -> Self {
        match p {
            PrimingArg::StageLocal => Priming::StageLocal,
            PrimingArg::Original => Priming::Original,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Admissibility predicates with counterexamples.
    Check { file: PathBuf },
    /// Points of the spectrum and the subbasic sets.
    Spectrum { file: PathBuf },
    /// Whether a set is Θ-near, with a witness.
    Near {
        file: PathBuf,
        /// Comma-separated elements; empty for ∅.
        #[arg(long, value_delimiter = ',', num_args = 0..=1, allow_hyphen_values = true)]
        set: Vec<String>,
    },
    /// The star of a member of Θ at an element.
    Star {
        file: PathBuf,
        /// Index into Θ as listed by `check`.
        #[arg(long)]
        cover: usize,
        #[arg(long)]
        element: String,
    },
    /// The relations ⊲ and ⊴.
    Below { file: PathBuf },
    /// Θ|S, or the star family Θp.
    Restrict {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..=1, conflicts_with = "star", required_unless_present = "star")]
        set: Option<Vec<String>>,
        #[arg(long)]
        star: Option<String>,
    },
    /// Iterate the priming map to Θ^R.
    Regularize {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "stage-local")]
        priming: PrimingArg,
        /// Write Θ^R as an instance file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a space file into an instance file.
    FromSpace {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// T1 round trip for a space, with Θ and with a seeded coinitial sample.
    Roundtrip {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Frame tables and the sublocale characterisation.
    FrameCheck { file: PathBuf },
    /// Every applicable proposition for an instance or a space.
    Props {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Text and JSON renderings of one command's result.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: EXIT_OK }
    }
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_INVALID };
        }
    };
    match dispatch(&cli.cmd) {
        Ok(rep) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&rep.json).expect("reports serialize") + "\n"
            } else {
                rep.text
            };
            let _ = out.write_all(body.as_bytes());
            rep.code
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.json {
                let v = json!({"error": e.to_string(), "exit": code});
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("errors serialize"));
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

pub fn exit_code(e: &NearnessError) -> i32 {
    match e {
        NearnessError::BoundExceeded { .. } => EXIT_BOUND,
        _ => EXIT_INVALID,
    }
}

fn dispatch(cmd: &Cmd) -> Result<Report> {
    match cmd {
        Cmd::Check { file } => check(&load_instance(file)?),
        Cmd::Spectrum { file } => spectrum(&load_instance(file)?),
        Cmd::Near { file, set } => near(&load_instance(file)?, set),
        Cmd::Star { file, cover, element } => star(&load_instance(file)?, *cover, element),
        Cmd::Below { file } => below(&load_instance(file)?),
        Cmd::Restrict { file, set, star } => restrict(&load_instance(file)?, set.as_deref(), star.as_deref()),
        Cmd::Regularize { file, priming, out } => regularize(&load_instance(file)?, (*priming).into(), out.as_deref()),
        Cmd::FromSpace { file, out } => from_space(&SpaceFile::load(file)?, out.as_deref()),
        Cmd::Roundtrip { file, seed } => roundtrip(&SpaceFile::load(file)?, *seed),
        Cmd::FrameCheck { file } => frame_check(&InstanceFile::load(file)?),
        Cmd::Props { file, seed } => props(&AnyFile::load(file)?, *seed),
    }
}

fn load_instance(path: &Path) -> Result<NearnessInstance> {
    InstanceFile::load(path)?.to_instance()
}

fn family(p: &Poset, masks: &[Mask]) -> String {
    let v: Vec<String> = masks.iter().map(|&m| p.format_mask(m)).collect();
    format!("{{{}}}", v.join(", "))
}

fn family_json(p: &Poset, masks: &[Mask]) -> Value {
    Value::from(masks.iter().map(|&m| names_of(p, m)).collect::<Vec<_>>())
}

fn header(n: &NearnessInstance, text: &mut String) -> Result<Vec<Mask>> {
    let p = n.poset();
    let members = n.member_masks()?;
    writeln!(text, "elements: {}", p.names().join(", ")).unwrap();
    writeln!(text, "Θ: {}", family(p, &members)).unwrap();
    Ok(members)
}

fn check(n: &NearnessInstance) -> Result<Report> {
    let p = n.poset();
    let mut t = String::new();
    let members = header(n, &mut t)?;
    let rep = AdmissibilityReport::compute(n)?;
    let forms = wallman_equivalent_forms(n)?;
    let degenerate = n.classify_degenerate()?;
    let rows = [
        ("weakly admissible", rep.weakly),
        ("wallman admissible", rep.wallman),
        ("picado-pultr admissible", rep.picado_pultr),
        ("admissible", rep.admissible),
        ("admissible (⋁∅ read vacuously)", rep.admissible_vacuous),
        ("Θ ⊆ C_≤(P)", rep.theta_subset_order_covers),
        ("≤ = ≤_Θ", rep.leq_equals_leq_theta),
        ("≤ = ≤_Θ^≤", rep.leq_equals_leq_theta_le),
    ];
    for (k, v) in rows {
        writeln!(t, "{k}: {v}").unwrap();
    }
    writeln!(t, "wallman forms: {forms}").unwrap();
    let banners = degenerate.banners();
    for b in &banners {
        writeln!(t, "degenerate case {b}").unwrap();
    }
    let cex: Vec<String> = rep.counterexamples.iter().map(|c| c.render(p)).collect();
    for c in &cex {
        writeln!(t, "counterexample: {c}").unwrap();
    }
    let json = json!({
        "elements": p.names(),
        "theta": family_json(p, &members),
        "weakly": rep.weakly,
        "wallman": rep.wallman,
        "picado_pultr": rep.picado_pultr,
        "admissible": rep.admissible,
        "admissible_vacuous_lub": rep.admissible_vacuous,
        "theta_subset_order_covers": rep.theta_subset_order_covers,
        "leq_equals_leq_theta": rep.leq_equals_leq_theta,
        "leq_equals_leq_theta_le": rep.leq_equals_leq_theta_le,
        "wallman_forms": {"form1": forms.form1(), "form2": forms.form2(), "form3": forms.form3(), "agree": forms.agree()},
        "degenerate": banners,
        "counterexamples": cex,
    });
    Ok(Report::ok(t, json))
}

fn spectrum(n: &NearnessInstance) -> Result<Report> {
    let p = n.poset();
    let sp = n.spectrum()?;
    let mut t = String::new();
    writeln!(t, "points: {}", sp.len()).unwrap();
    for (i, &r) in sp.point_masks().iter().enumerate() {
        writeln!(t, "R{i} = {}", p.format_mask(r)).unwrap();
    }
    let mut subbasic = serde_json::Map::new();
    for x in 0..p.len() {
        let ids: Vec<String> = sp.subbasic(x).iter().map(|i| format!("R{i}")).collect();
        writeln!(t, "Θ̂_{} = {{{}}}", p.name(x), ids.join(",")).unwrap();
        subbasic.insert(p.name(x).to_string(), Value::from(sp.subbasic(x).to_vec()));
    }
    let json = json!({"points": family_json(p, sp.point_masks()), "subbasic": subbasic});
    Ok(Report::ok(t, json))
}

fn near(n: &NearnessInstance, set: &[String]) -> Result<Report> {
    let p = n.poset();
    let names: Vec<&String> = set.iter().filter(|s| !s.is_empty()).collect();
    let s = p.set_from_names(&names)?;
    let w = n.is_near(&s)?;
    let mut t = String::new();
    writeln!(t, "S = {}", p.format_set(&s)).unwrap();
    writeln!(t, "near: {}", w.is_near()).unwrap();
    if let Some(d) = &w.witness {
        writeln!(t, "witness D = {}", p.format_set(d)).unwrap();
    }
    let json = json!({
        "set": names_of(p, s.bits()),
        "near": w.is_near(),
        "witness": w.witness.as_ref().map(|d| names_of(p, d.bits())),
    });
    Ok(Report::ok(t, json))
}

fn star(n: &NearnessInstance, cover: usize, element: &str) -> Result<Report> {
    let p = n.poset();
    let members = n.member_masks()?;
    let c = *members.get(cover).ok_or(NearnessError::IndexOutOfRange(cover))?;
    let x = p.index_of(element)?;
    let st = n.star_mask(c, x)?;
    let t = format!(
        "C = {}\np = {}\nCp = {}\n",
        p.format_mask(c),
        element,
        p.format_mask(st)
    );
    let json = json!({"cover": names_of(p, c), "element": element, "star": names_of(p, st)});
    Ok(Report::ok(t, json))
}

fn below(n: &NearnessInstance) -> Result<Report> {
    let p = n.poset();
    let rel = n.below_relations()?;
    let mut t = String::new();
    writeln!(t, "⊲: {} pairs", rel.count()).unwrap();
    let pairs: Vec<[&str; 2]> = rel.pairs().into_iter().map(|(a, b)| [p.name(a), p.name(b)]).collect();
    for [a, b] in &pairs {
        writeln!(t, "  {a} ⊲ {b}").unwrap();
    }
    let mut lower = serde_json::Map::new();
    let mut primed = serde_json::Map::new();
    writeln!(t, "⊴ (row p lists q with p ⊴ q):").unwrap();
    for x in 0..p.len() {
        writeln!(t, "  {}: {}", p.name(x), p.format_mask(rel.lower_row(x))).unwrap();
        lower.insert(p.name(x).to_string(), names_of(p, rel.lower_row(x)).into());
    }
    writeln!(t, "p^▷:").unwrap();
    for x in 0..p.len() {
        writeln!(t, "  {}: {}", p.name(x), p.format_mask(rel.below_mask(x))).unwrap();
        primed.insert(p.name(x).to_string(), names_of(p, rel.below_mask(x)).into());
    }
    let json = json!({"below": pairs, "count": rel.count(), "lower": lower, "primed": primed});
    Ok(Report::ok(t, json))
}

fn restrict(n: &NearnessInstance, set: Option<&[String]>, star: Option<&str>) -> Result<Report> {
    let p = n.poset();
    let mut t = String::new();
    if let Some(x) = star {
        let i = p.index_of(x)?;
        let fam = n.theta_star_masks(i)?;
        writeln!(t, "Θ{x} = {}", family(p, &fam)).unwrap();
        let json = json!({"star": x, "family": family_json(p, &fam)});
        return Ok(Report::ok(t, json));
    }
    let names: Vec<&String> = set.unwrap_or_default().iter().filter(|s| !s.is_empty()).collect();
    let s = p.set_from_names(&names)?;
    let r = n.restriction(&s)?;
    let members = r.member_masks();
    let minimal = r.minimal_member_masks();
    let label = p.format_set(&s);
    writeln!(t, "Θ|{label}: {} members", members.len()).unwrap();
    writeln!(t, "minimal: {}", family(p, &minimal)).unwrap();
    writeln!(t, "members: {}", family(p, &members)).unwrap();
    let json = json!({
        "set": names_of(p, s.bits()),
        "minimal": family_json(p, &minimal),
        "members": family_json(p, &members),
    });
    Ok(Report::ok(t, json))
}

fn priming_name(p: Priming) -> &'static str {
    match p {
        Priming::StageLocal => "stage-local",
        Priming::Original => "original",
    }
}

fn regularize(n: &NearnessInstance, priming: Priming, out: Option<&Path>) -> Result<Report> {
    let p = n.poset();
    let reg = n.regularise(priming)?;
    let file = InstanceFile::from_instance(&reg.instance)?;
    let result = reg.instance.member_masks()?;
    let mut t = String::new();
    writeln!(t, "priming: {}", priming_name(priming)).unwrap();
    for (i, st) in reg.stages.iter().enumerate() {
        writeln!(t, "Θ^{} = {}", i + 1, family(p, st)).unwrap();
    }
    writeln!(t, "cycle returns to stage {}", reg.cycle_start + 1).unwrap();
    writeln!(t, "Θ^R = {}", family(p, &result)).unwrap();
    if let Some(path) = out {
        write_file(path, &file.to_json())?;
        writeln!(t, "wrote {}", path.display()).unwrap();
    } else {
        writeln!(t, "{}", file.to_json()).unwrap();
    }
    let stages: Vec<Value> = reg.stages.iter().map(|s| family_json(p, s)).collect();
    let json = json!({
        "priming": priming_name(priming),
        "stages": stages,
        "cycle_start": reg.cycle_start + 1,
        "instance": file,
    });
    Ok(Report::ok(t, json))
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, format!("{body}\n")).map_err(|_| NearnessError::Io(path.display().to_string()))
}

fn from_space(f: &SpaceFile, out: Option<&Path>) -> Result<Report> {
    let (_, inst) = f.build()?;
    let file = InstanceFile::from_instance(&inst)?;
    let text = match out {
        Some(path) => {
            write_file(path, &file.to_json())?;
            format!("wrote {}\n", path.display())
        }
        None => file.to_json() + "\n",
    };
    Ok(Report::ok(text, serde_json::to_value(&file).expect("instance files serialize")))
}

fn roundtrip(f: &SpaceFile, seed: u64) -> Result<Report> {
    let (s, theta) = f.build()?;
    let mut t = String::new();
    writeln!(t, "seed: {seed}").unwrap();
    let mut runs = vec![("Θ", theta)];
    let mut sample_seed = None;
    if let Some((inst, sd)) = coinitial_sample(&s, seed)? {
        sample_seed = Some(sd);
        runs.push(("sample", inst));
    } else {
        writeln!(t, "sample: no coinitial sample found").unwrap();
    }
    let mut ok = true;
    let mut json_runs = Vec::new();
    for (label, inst) in &runs {
        let r = s.roundtrip_t1(inst)?;
        ok &= r.ok();
        let p = inst.poset();
        writeln!(t, "[{label}] Θ = {}", family(p, &inst.member_masks()?)).unwrap();
        writeln!(
            t,
            "[{label}] t1: {} coinitial: {} points: {} spectrum points: {}",
            r.t1, r.coinitial, r.points, r.spectrum_points
        )
        .unwrap();
        writeln!(
            t,
            "[{label}] bijection: {} subbasis: {} cauchy covers: {} subbasis order: {}",
            r.bijection, r.subbasis_match, r.cauchy_covers, r.subbasis_order
        )
        .unwrap();
        for note in &r.notes {
            writeln!(t, "[{label}] note: {note}").unwrap();
        }
        writeln!(t, "[{label}] result: {}", if r.ok() { "pass" } else { "FAIL" }).unwrap();
        json_runs.push(json!({
            "theta": label,
            "t1": r.t1, "coinitial": r.coinitial,
            "points": r.points, "spectrum_points": r.spectrum_points,
            "bijection": r.bijection, "subbasis_match": r.subbasis_match,
            "cauchy_covers": r.cauchy_covers, "subbasis_order": r.subbasis_order,
            "notes": r.notes, "ok": r.ok(),
        }));
    }
    let json = json!({"seed": seed, "sample_seed": sample_seed, "runs": json_runs, "ok": ok});
    Ok(Report {
        text: t,
        json,
        code: if ok { EXIT_OK } else { EXIT_VIOLATED },
    })
}

fn suite_report(mut t: String, mut json: Value, suite: &Suite) -> Report {
    let pass = suite.all_pass();
    write!(t, "{suite}").unwrap();
    writeln!(t, "result: {}", if pass { "pass" } else { "FAIL" }).unwrap();
    json["checks"] = serde_json::to_value(&suite.checks).expect("suites serialize");
    json["pass"] = pass.into();
    Report {
        text: t,
        json,
        code: if pass { EXIT_OK } else { EXIT_VIOLATED },
    }
}

fn frame_check(f: &InstanceFile) -> Result<Report> {
    let inst = f.to_instance()?;
    let frame = FiniteFrame::new(inst.poset_arc().clone())?;
    let p = frame.poset();
    let mut t = String::new();
    writeln!(t, "elements: {}", p.names().join(", ")).unwrap();
    writeln!(t, "top: {} bottom: {}", p.name(frame.top()), p.name(frame.bottom())).unwrap();
    let mut heyting = serde_json::Map::new();
    writeln!(t, "p → q:").unwrap();
    for a in 0..frame.len() {
        let row: Vec<&str> = (0..frame.len()).map(|b| p.name(frame.heyting(a, b))).collect();
        writeln!(t, "  {}: {}", p.name(a), row.join(" ")).unwrap();
        heyting.insert(p.name(a).to_string(), row.into());
    }
    let theta = (!inst.theta_is_empty()).then_some(&inst);
    let suite = check_frame(&frame, theta)?;
    let json = json!({
        "elements": p.names(),
        "top": p.name(frame.top()),
        "bottom": p.name(frame.bottom()),
        "heyting": heyting,
    });
    Ok(suite_report(t, json, &suite))
}

fn props(file: &AnyFile, seed: u64) -> Result<Report> {
    let mut t = String::new();
    writeln!(t, "seed: {seed}").unwrap();
    let mut suite = Suite::default();
    match file {
        AnyFile::Instance(f) => {
            let inst = f.to_instance()?;
            header(&inst, &mut t)?;
            suite.extend("", check_instance(&inst)?);
            if f.frame.is_some() {
                let frame = FiniteFrame::new(inst.poset_arc().clone())?;
                suite.extend("frame/", check_frame(&frame, Some(&inst))?);
            }
        }
        AnyFile::Space(f) => {
            let (s, inst) = f.build()?;
            writeln!(t, "points: {}", s.points().join(", ")).unwrap();
            header(&inst, &mut t)?;
            suite.extend("space/", check_space(&s, Some(&inst), seed)?);
            suite.extend("", check_instance(&inst)?);
        }
    }
    Ok(suite_report(t, json!({"seed": seed}), &suite))
}

