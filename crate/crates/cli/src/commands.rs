use std::fs;
use std::io::Read;
use std::path::Path;

use serde::Serialize;

use dihedral_core::bounds::{self, Axis, Family, GridSpec, KmaxCertificate, SweepResult};
use dihedral_core::fourball::{self, ApexSide, CenterLocation, FourBallChecks};
use dihedral_core::io::{self as docs, MeshDocument, TetraDocument};
use dihedral_core::partition::{self, ConformityReport, PartitionKind};
use dihedral_core::tetra::{regular_sum, Classification, THREE_PI, TWO_PI};
use dihedral_core::{Edge, EdgeSextuple, Tetra, Tolerance, Vec3};

use crate::format::{angle, num, pass_fail, point, round2, yes_no};
use crate::{BuildMode, BuildOutput, Cli, CliError, Command, FamilyArg, GlobalOpts, KindArg};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    let tol = g.tolerance()?;
    match &cli.command {
        Command::Analyze { input } => analyze(g, tol, input),
        Command::Build { mode } => build(g, tol, mode),
        Command::Partition {
            input,
            kind,
            out,
            obj,
            levels,
        } => partition_cmd(g, tol, input, *kind, out, obj.as_deref(), *levels),
        Command::Sweep {
            family,
            lo,
            hi,
            n,
            log,
            out,
        } => sweep_cmd(g, tol, *family, *lo, *hi, *n, *log, out),
        Command::CertifyKmax { resolution } => certify(g, *resolution),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
    }
}

fn load(path: &Path, base: Tolerance) -> Result<(TetraDocument, Tetra, Tolerance), CliError> {
    let doc = TetraDocument::from_json(&read_input(path)?)?;
    let tol = doc.tolerance(base)?;
    let t = doc.to_tetra(&tol)?;
    Ok((doc, t, tol))
}

fn print_json<T: Serialize>(value: &T) {
    out!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

#[derive(Serialize)]
struct LaszloChain {
    circumradius: f64,
    sqrt3_rho: f64,
    three_inradius: f64,
    holds: bool,
}

#[derive(Serialize)]
struct FourBallSection {
    tangent_lengths: [f64; 4],
    midsphere_radius: f64,
    midsphere_center: Vec3,
    center_location: CenterLocation,
    chain: LaszloChain,
}

#[derive(Serialize)]
struct AnalyzeReport {
    label: Option<String>,
    vertices: [Vec3; 4],
    edges: EdgeSextuple,
    volume: f64,
    d3: f64,
    d3_blumenthal: f64,
    dihedral_radians: [f64; 6],
    dihedral_degrees: [f64; 6],
    sigma_radians: f64,
    sigma_degrees: f64,
    classes: Classification,
    inradius: f64,
    circumradius: f64,
    circumcenter: Vec3,
    fourball_checks: FourBallChecks,
    fourball: Option<FourBallSection>,
}

fn analyze(g: &GlobalOpts, base: Tolerance, input: &Path) -> Result<(), CliError> {
    let (doc, t, tol) = load(input, base)?;
    let s = t.edge_sextuple();
    let angles = t.angle_report(&tol)?;
    let (_, inradius) = t.insphere(&tol)?;
    let (circumcenter, circumradius) = t.circumsphere(&tol)?;
    let fourball = if angles.flags.fourball {
        let l = fourball::fourball_tangents(&t, &tol)?;
        let m = fourball::midsphere(&t, &tol)?;
        let sqrt3_rho = 3f64.sqrt() * m.radius;
        let three_inradius = 3.0 * inradius;
        Some(FourBallSection {
            tangent_lengths: l.as_array(),
            midsphere_radius: m.radius,
            midsphere_center: m.center,
            center_location: m.location,
            chain: LaszloChain {
                circumradius,
                sqrt3_rho,
                three_inradius,
                holds: circumradius >= sqrt3_rho - tol.at(circumradius)
                    && sqrt3_rho >= three_inradius - tol.at(sqrt3_rho),
            },
        })
    } else {
        None
    };
    let report = AnalyzeReport {
        label: doc.label.clone(),
        vertices: *t.vertices(),
        edges: s,
        volume: t.volume(),
        d3: s.cayley_menger_d3(),
        d3_blumenthal: s.cayley_menger_blumenthal(),
        dihedral_radians: angles.dihedral,
        dihedral_degrees: angles.dihedral.map(|a| round2(a.to_degrees())),
        sigma_radians: angles.sum,
        sigma_degrees: round2(angles.sum_degrees()),
        classes: angles.flags,
        inradius,
        circumradius,
        circumcenter,
        fourball_checks: fourball::fourball_checks(&t, &tol)?,
        fourball,
    };
    if g.json {
        print_json(&report);
        return Ok(());
    }

    let r = g.radians;
    if let Some(label) = &report.label {
        out!("label: {label}");
    }
    for (i, v) in report.vertices.iter().enumerate() {
        out!("P{}: {}", i + 1, point(*v));
    }
    let edges: Vec<String> = Edge::ALL
        .iter()
        .map(|e| format!("{}={}", e.label(), num(s.get(*e))))
        .collect();
    out!("edges: {}", edges.join(" "));
    out!("volume: {}", num(report.volume));
    out!(
        "D3: {} (Blumenthal {})",
        num(report.d3),
        num(report.d3_blumenthal)
    );
    let dihedral: Vec<String> = Edge::ALL
        .iter()
        .map(|e| format!("{}={}", e.label(), angle(angles.get(*e), r)))
        .collect();
    out!("dihedral: {}", dihedral.join(" "));
    out!("sum: {}", angle(angles.sum, r));
    let c = angles.flags;
    out!(
        "classes: path={} fourball={} equifacial={} nonobtuse={}",
        yes_no(c.path),
        yes_no(c.fourball),
        yes_no(c.equifacial),
        yes_no(c.nonobtuse)
    );
    out!("inradius: {}", num(inradius));
    out!(
        "circumradius: {} center {}",
        num(circumradius),
        point(circumcenter)
    );
    let checks = report.fourball_checks;
    let names = [
        "edge sums",
        "dihedral sums",
        "incircles touch",
        "kissing balls",
        "incenter normals",
    ];
    for (name, check) in names.iter().zip(checks.as_array()) {
        out!(
            "check {name}: {} (residual {})",
            pass_fail(check.pass),
            num(check.residual)
        );
    }
    if let Some(fb) = &report.fourball {
        let l: Vec<String> = fb.tangent_lengths.iter().map(|x| num(*x)).collect();
        out!("tangent lengths: {}", l.join(" "));
        out!(
            "midsphere: radius {} center {} {}",
            num(fb.midsphere_radius),
            point(fb.midsphere_center),
            location_name(fb.center_location)
        );
        out!(
            "chain R >= sqrt3 rho >= 3r: {} >= {} >= {} {}",
            num(fb.chain.circumradius),
            num(fb.chain.sqrt3_rho),
            num(fb.chain.three_inradius),
            pass_fail(fb.chain.holds)
        );
    }
    Ok(())
}

fn location_name(loc: CenterLocation) -> &'static str {
    match loc {
        CenterLocation::Interior => "interior",
        CenterLocation::Boundary => "boundary",
        CenterLocation::Exterior => "exterior",
    }
}

#[derive(Serialize)]
struct BuildReport {
    tetra: TetraDocument,
    tangent_lengths: [f64; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<FourBallChecks>,
}

fn build(g: &GlobalOpts, tol: Tolerance, mode: &BuildMode) -> Result<(), CliError> {
    let (t, output, label) = match mode {
        BuildMode::FromFace {
            p1,
            p2,
            p3,
            l4,
            mirror,
            output,
        } => {
            let side = if *mirror {
                ApexSide::Mirror
            } else {
                ApexSide::Positive
            };
            let tri = [Vec3::from(*p1), Vec3::from(*p2), Vec3::from(*p3)];
            (
                fourball::fourball_from_face(tri, *l4, side, &tol)?,
                output,
                "from-face",
            )
        }
        BuildMode::FromCone { u1, u2, u3, output } => {
            let dirs = [Vec3::from(*u1), Vec3::from(*u2), Vec3::from(*u3)];
            (
                fourball::fourball_from_cone(dirs, &tol)?,
                output,
                "from-cone",
            )
        }
    };
    emit_build(g, &tol, &t, output, label)
}

fn emit_build(
    g: &GlobalOpts,
    tol: &Tolerance,
    t: &Tetra,
    output: &BuildOutput,
    label: &str,
) -> Result<(), CliError> {
    let l = fourball::fourball_tangents(t, tol)?;
    let checks = if output.check {
        Some(fourball::fourball_checks(t, tol)?)
    } else {
        None
    };
    let doc = TetraDocument::from_vertices(t).with_label(label);
    if let Some(path) = &output.out {
        fs::write(path, doc.to_json() + "\n")?;
    }
    if g.json {
        print_json(&BuildReport {
            tetra: doc,
            tangent_lengths: l.as_array(),
            checks,
        });
    } else {
        for (i, v) in t.vertices().iter().enumerate() {
            out!("P{}: {}", i + 1, point(*v));
        }
        let ls: Vec<String> = l.as_array().iter().map(|x| num(*x)).collect();
        out!("tangent lengths: {}", ls.join(" "));
        if let Some(c) = checks {
            out!("checks: {}", pass_fail(c.all_pass()));
        }
    }
    if checks.is_some_and(|c| !c.all_pass()) {
        return Err(CliError::ClaimFailed(
            "constructed tetrahedron failed the 4-ball checks".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct CellLine {
    index: usize,
    path_ordering: Option<[usize; 4]>,
    volume: f64,
}

#[derive(Serialize)]
struct PartitionReport {
    kind: PartitionKind,
    cells: usize,
    vertices: usize,
    conformity: ConformityReport,
    all_path: bool,
    per_cell: Vec<CellLine>,
}

fn partition_cmd(
    g: &GlobalOpts,
    base: Tolerance,
    input: &Path,
    kind: KindArg,
    out: &Path,
    obj: Option<&Path>,
    levels: u32,
) -> Result<(), CliError> {
    let (_, t, tol) = load(input, base)?;
    let p = match kind {
        KindArg::Fourball24 => partition::partition_fourball_24(&t, &tol)?,
        KindArg::Red8 => {
            if levels == 0 {
                return Err(CliError::Usage("levels must be at least 1".into()));
            }
            partition::red_refine_recursive(&t, levels, &tol)?
        }
    };
    let conformity = partition::validate_conformity(&p, &tol);
    let mesh = MeshDocument::from_partition(&p, None, &tol);
    fs::write(out, mesh.to_off())?;
    if let Some(obj) = obj {
        fs::write(obj, mesh.to_obj_surface())?;
    }
    let per_cell: Vec<CellLine> = mesh
        .cell_points()
        .into_iter()
        .enumerate()
        .map(|(index, v)| {
            let cell = Tetra::degenerate(v);
            CellLine {
                index,
                path_ordering: cell.path_ordering(&tol),
                volume: cell.volume(),
            }
        })
        .collect();
    let all_path = per_cell.iter().all(|c| c.path_ordering.is_some());
    let report = PartitionReport {
        kind: p.kind,
        cells: p.cells.len(),
        vertices: mesh.vertices.len(),
        conformity,
        all_path,
        per_cell,
    };
    if g.json {
        print_json(&report);
    } else {
        out!("kind: {}", p.kind.name());
        out!("cells: {} vertices: {}", report.cells, report.vertices);
        for c in &report.per_cell {
            match c.path_ordering {
                Some(o) => out!("cell {}: path {:?} volume {}", c.index, o, num(c.volume)),
                None => out!("cell {}: NOT PATH volume {}", c.index, num(c.volume)),
            }
        }
        out!(
            "volume residual: {}",
            num(report.conformity.volume_residual)
        );
        out!(
            "face-to-face: {}",
            yes_no(report.conformity.is_face_to_face)
        );
        if let Some(w) = &report.conformity.worst_pair {
            out!(
                "violation: cell {} {:?}: {}",
                w.first,
                w.second,
                w.description
            );
        }
    }
    if !(report.all_path && report.conformity.is_face_to_face) {
        return Err(CliError::ClaimFailed(
            "partition failed verification".into(),
        ));
    }
    Ok(())
}

struct AxisDefaults {
    lo: f64,
    hi: f64,
    n: usize,
    log: bool,
}

fn family_of(arg: FamilyArg) -> Family {
    match arg {
        FamilyArg::PathDiag => Family::PathDiag,
        FamilyArg::CubeCorner => Family::CubeCorner,
        FamilyArg::EqPyramid => Family::EqPyramid,
        FamilyArg::EquifacialBox => Family::EquifacialBox,
        FamilyArg::RandomFourball => Family::RandomFourball,
    }
}

fn defaults(f: Family) -> AxisDefaults {
    match f {
        Family::PathDiag => AxisDefaults {
            lo: 1e-3,
            hi: 1e3,
            n: 200,
            log: true,
        },
        Family::CubeCorner => AxisDefaults {
            lo: 0.1,
            hi: 10.0,
            n: 20,
            log: true,
        },
        Family::EqPyramid => AxisDefaults {
            lo: 0.01,
            hi: 20.0,
            n: 500,
            log: true,
        },
        Family::EquifacialBox => AxisDefaults {
            lo: 0.5,
            hi: 1.5,
            n: 11,
            log: false,
        },
        Family::RandomFourball => AxisDefaults {
            lo: 0.0,
            hi: 0.0,
            n: 10_000,
            log: false,
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn sweep_cmd(
    g: &GlobalOpts,
    tol: Tolerance,
    family: FamilyArg,
    lo: Option<f64>,
    hi: Option<f64>,
    n: Option<usize>,
    log: bool,
    out: &Path,
) -> Result<(), CliError> {
    let family = family_of(family);
    let d = defaults(family);
    let grid = if family == Family::RandomFourball {
        if lo.is_some() || hi.is_some() {
            return Err(CliError::Usage(
                "random_fourball takes --n and --seed, not --lo/--hi".into(),
            ));
        }
        GridSpec::Random {
            n: n.unwrap_or(d.n),
            seed: g.seed,
        }
    } else {
        let custom = lo.is_some() || hi.is_some();
        let axis = Axis {
            lo: lo.unwrap_or(d.lo),
            hi: hi.unwrap_or(d.hi),
            n: n.unwrap_or(d.n),
            log: if custom { log } else { d.log || log },
        };
        GridSpec::Axes(vec![axis; family.arity()])
    };
    let result = bounds::sweep(family, &grid, &tol)?;
    let file = fs::File::create(out)?;
    docs::write_sweep_csv(&result, file)?;
    report_sweep(g, &result);
    if !result.all_pass() {
        return Err(CliError::ClaimFailed("a bound verdict failed".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    family: Family,
    samples: usize,
    min: f64,
    max: f64,
    argmin: &'a [f64],
    argmax: &'a [f64],
    verdicts: &'a [bounds::Verdict],
}

fn report_sweep(g: &GlobalOpts, r: &SweepResult) {
    if g.json {
        print_json(&SweepSummary {
            family: r.family,
            samples: r.samples.len(),
            min: r.min,
            max: r.max,
            argmin: &r.argmin,
            argmax: &r.argmax,
            verdicts: &r.verdicts,
        });
        return;
    }
    let show = |p: &[f64]| p.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ");
    out!("family: {} samples: {}", r.family, r.samples.len());
    out!("min: {} at ({})", angle(r.min, g.radians), show(&r.argmin));
    out!("max: {} at ({})", angle(r.max, g.radians), show(&r.argmax));
    for v in &r.verdicts {
        out!("{} {}", pass_fail(v.pass), v.claim);
    }
    out!(
        "verdict: {} (2π = {}, 2.5π = {}, cube corner min = {}, 6 arccos(1/3) = {}, 3π = {})",
        pass_fail(r.all_pass()),
        angle(TWO_PI, g.radians),
        angle(2.5 * std::f64::consts::PI, g.radians),
        angle(bounds::cube_corner_min(), g.radians),
        angle(regular_sum(), g.radians),
        angle(THREE_PI, g.radians),
    );
}

fn certify(g: &GlobalOpts, resolution: usize) -> Result<(), CliError> {
    let c: KmaxCertificate = bounds::certify_kmax(resolution)?;
    let iso_ok = c.isosceles_agreement < 1e-8 && (c.isosceles_max - c.k_max).abs() < 1e-6;
    let pass = c.error < 1e-4;
    if g.json {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            cert: &'a KmaxCertificate,
            exact: f64,
            sigma_lower_degrees: f64,
            isosceles_pass: bool,
            pass: bool,
        }
        print_json(&Out {
            cert: &c,
            exact: bounds::k_max_exact(),
            sigma_lower_degrees: c.sigma_lower.to_degrees(),
            isosceles_pass: iso_ok,
            pass,
        });
    } else {
        out!("resolution: {}", c.resolution);
        out!(
            "argmax: ({}, {}, {})",
            num(c.argmax[0]),
            num(c.argmax[1]),
            num(c.argmax[2])
        );
        out!("k_max: {}", num(c.k_max));
        out!("|k_max - 2 arccos(-1/3)|: {}", num(c.error));
        out!("implied lower bound: {}", angle(c.sigma_lower, g.radians));
        out!(
            "isosceles cross-check: {} (max {} at a = {}, solver agreement {})",
            pass_fail(iso_ok),
            num(c.isosceles_max),
            num(c.isosceles_argmax),
            num(c.isosceles_agreement)
        );
    }
    if !(pass && iso_ok) {
        return Err(CliError::ClaimFailed("k_max certification failed".into()));
    }
    Ok(())
}
