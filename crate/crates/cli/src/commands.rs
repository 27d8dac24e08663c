use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use transship::bounds::{
    euclidean_lower_bound, euclidean_upper_bound, gap_analysis, inventory_comparison, l1_optimum, sensitivity_sweep,
    write_sweep_csv, write_sweep_svg, Design, PlotQuantity, Spacing, SweepOptions,
};
use transship::discrete::{
    best_of_runs, exhaustive_optimum, export_mip, measure_basic_angles, GridInstance, GridSolution, Schedule,
    TourPolicy, REFERENCE_EUCLID, REFERENCE_L1,
};
use transship::tessellation::{build, export_geometry, monte_carlo_cost, validate_partition, GeometryFormat};
use transship::{InventoryParams, Metric, SystemParams};

use crate::config::{metadata, preamble, required, Options};
use crate::error::{io_error, CliError};

/// Prints a summary line; a closed stdout (e.g. a pipe into `head`) is not
/// an error for the command.
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(io::stdout(), $($arg)*);
    }};
}

/// Largest relative deviation of the Monte-Carlo cost from the analytic
/// optimum accepted by `tessellate --verify-samples`.
const MC_TOLERANCE: f64 = 0.005;

fn parse_spacing(s: &str) -> Result<Spacing, String> {
    match s {
        "linear" => Ok(Spacing::Linear),
        "log" => Ok(Spacing::Log),
        _ => Err(format!("unknown spacing '{s}' (expected linear or log)")),
    }
}

fn parse_quantity(s: &str) -> Result<PlotQuantity, String> {
    match s {
        "alpha" => Ok(PlotQuantity::Alpha),
        "alpha-bar" | "alpha_bar" | "alphabar" => Ok(PlotQuantity::AlphaBar),
        "g" => Ok(PlotQuantity::G),
        "cost" => Ok(PlotQuantity::Cost),
        _ => Err(format!("unknown quantity '{s}' (expected alpha, alpha-bar, g or cost)")),
    }
}

fn parse_tours(s: &str) -> Result<String, String> {
    match s {
        "auto" | "exact" | "heuristic" => Ok(s.to_string()),
        _ => Err(format!("unknown tour policy '{s}' (expected auto, exact or heuristic)")),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

fn finish(path: &Path, mut w: BufWriter<File>) -> Result<(), CliError> {
    w.flush().map_err(|e| io_error(path, e))
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON value serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn stdout_error(e: io::Error) -> CliError {
    CliError::Io(format!("stdout: {e}"))
}

fn design_summary(d: &Design) -> Value {
    json!({
        "design": d.kind.label(),
        "cost": d.density.cost,
        "area_per_facility": d.density.area_per_facility,
        "g": d.density.g_value,
        "alpha_deg": d.shape.alpha.to_degrees(),
        "alpha_bar_deg": d.shape.alpha_bar.to_degrees(),
        "circumradius": d.shape.circumradius,
        "tour_length": d.tour_length,
    })
}

fn design_line(d: &Design) -> String {
    let c = d.density.cost;
    format!(
        "{:<7} {:>12.6} {:>10.6} {:>10.6} {:>10.6} {:>12.6} {:>9.4} {:>9.4}",
        d.kind.label(),
        c.total,
        c.facility,
        c.outbound,
        c.inbound,
        d.density.area_per_facility,
        d.shape.alpha.to_degrees(),
        d.shape.alpha_bar.to_degrees()
    )
}

const DESIGN_HEADER: &str = "design          cost   facility   outbound    inbound    area/fac.   α (deg)   ᾱ (deg)";

// ---------------------------------------------------------------- bounds

/// Analytic bounds (Euclidean) or the exact optimum (L1) for given rates.
#[derive(Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BoundsOpts {
    /// Facility cost per unit time.
    #[arg(long)]
    pub f: Option<f64>,
    /// Outbound cost per demand-distance [default: 1].
    #[arg(long)]
    pub c: Option<f64>,
    /// Demand per area-time [default: 1].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Inbound tour cost per distance [default: 0].
    #[arg(long = "C")]
    #[serde(rename = "C")]
    pub big_c: Option<f64>,
    /// euclid or l1 [default: euclid].
    #[arg(long)]
    pub metric: Option<Metric>,
    /// Print JSON instead of a table.
    #[arg(long)]
    #[serde(default)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Options for BoundsOpts {
    const NAME: &'static str = "bounds";

    fn resolve(&mut self) -> Result<(), CliError> {
        required(self.f, "f")?;
        self.c.get_or_insert(1.0);
        self.lambda.get_or_insert(1.0);
        self.big_c.get_or_insert(0.0);
        self.metric.get_or_insert(Metric::Euclid);
        Ok(())
    }
}

pub fn bounds(o: &BoundsOpts) -> Result<(), CliError> {
    let p = SystemParams::new(o.f.unwrap(), o.c.unwrap(), o.lambda.unwrap(), o.big_c.unwrap())?;
    let metric = o.metric.unwrap();
    let meta = metadata(o);
    let (designs, gap, text) = match metric {
        Metric::Euclid => {
            let ub = euclidean_upper_bound(&p)?;
            let lb = euclidean_lower_bound(&p)?;
            let gap = gap_analysis(&[p.r()])?.max_gap;
            let text = format!(
                "{DESIGN_HEADER}\n{}\n{}\ngap (upper/lower − 1): {:.4}%",
                design_line(&ub),
                design_line(&lb),
                100.0 * gap
            );
            (vec![ub, lb], Some(gap), text)
        }
        Metric::L1 => {
            let opt = l1_optimum(&p)?;
            let ub = euclidean_upper_bound(&p)?;
            let excess = opt.density.cost.total / ub.density.cost.total - 1.0;
            let text = format!(
                "{DESIGN_HEADER}\n{}\nexcess over the Euclidean upper bound: {:.4}%",
                design_line(&opt),
                100.0 * excess
            );
            (vec![opt], None, text)
        }
    };
    let report = json!({
        "meta": meta,
        "metric": metric,
        "kappa": p.kappa(),
        "r": p.r(),
        "designs": designs.iter().map(design_summary).collect::<Vec<_>>(),
        "gap": gap,
    });
    if let Some(path) = &o.out {
        write_json(path, &report)?;
    }
    if o.json {
        say!(
            "{}",
            serde_json::to_string_pretty(&report).expect("JSON value serializes")
        );
    } else {
        say!("{} metric, κ = {}, r = {}", metric, p.kappa(), p.r());
        say!("{text}");
    }
    Ok(())
}

// ----------------------------------------------------------------- sweep

/// Upper bound, lower bound and L1 optimum over a grid of r.
#[derive(Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepOpts {
    /// [default: 0]
    #[arg(long)]
    pub r_min: Option<f64>,
    /// [default: 20]
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Grid points [default: 201].
    #[arg(long)]
    pub steps: Option<usize>,
    /// linear or log [default: log].
    #[arg(long, value_parser = parse_spacing)]
    pub spacing: Option<Spacing>,
    /// Report costs at the given rates instead of κ = f = 1.
    #[arg(long)]
    #[serde(default)]
    pub raw: bool,
    /// Facility cost for --raw [default: 1].
    #[arg(long)]
    pub f: Option<f64>,
    /// Outbound rate for --raw [default: 1].
    #[arg(long)]
    pub c: Option<f64>,
    /// Demand density for --raw [default: 1].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Plotted quantity: alpha, alpha-bar, g or cost [default: alpha].
    #[arg(long, value_parser = parse_quantity)]
    pub quantity: Option<PlotQuantity>,
    /// CSV output; stdout when neither --out nor --plot is given.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG plot output.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

impl Options for SweepOpts {
    const NAME: &'static str = "sweep";

    fn resolve(&mut self) -> Result<(), CliError> {
        let d = SweepOptions::default();
        self.r_min.get_or_insert(d.r_min);
        self.r_max.get_or_insert(d.r_max);
        self.steps.get_or_insert(d.steps);
        self.spacing.get_or_insert(d.spacing);
        self.f.get_or_insert(1.0);
        self.c.get_or_insert(1.0);
        self.lambda.get_or_insert(1.0);
        self.quantity.get_or_insert(PlotQuantity::Alpha);
        Ok(())
    }
}

fn write_csv_with_preamble<W: Write>(
    mut w: W,
    pre: &[String],
    body: impl FnOnce(&mut W) -> io::Result<()>,
) -> io::Result<()> {
    for line in pre {
        writeln!(w, "# {line}")?;
    }
    body(&mut w)
}

pub fn sweep(o: &SweepOpts) -> Result<(), CliError> {
    let template = SystemParams::new(o.f.unwrap(), o.c.unwrap(), o.lambda.unwrap(), 0.0)?;
    let opts = SweepOptions {
        r_min: o.r_min.unwrap(),
        r_max: o.r_max.unwrap(),
        steps: o.steps.unwrap(),
        spacing: o.spacing.unwrap(),
        normalize: !o.raw,
    };
    let rows = sensitivity_sweep(&template, &opts)?;
    let pre = preamble(&metadata(o));
    if let Some(path) = &o.out {
        let mut w = create(path)?;
        write_csv_with_preamble(&mut w, &pre, |w| write_sweep_csv(w, &rows)).map_err(|e| io_error(path, e))?;
        finish(path, w)?;
    }
    if let Some(path) = &o.plot {
        let mut w = create(path)?;
        write_sweep_svg(&mut w, &rows, o.quantity.unwrap(), &pre).map_err(|e| io_error(path, e))?;
        finish(path, w)?;
    }
    if o.out.is_none() && o.plot.is_none() {
        write_csv_with_preamble(io::stdout().lock(), &pre, |w| write_sweep_csv(w, &rows)).map_err(stdout_error)?;
    } else {
        say!("{} rows over {} values of r", rows.len(), opts.steps);
    }
    Ok(())
}

// ------------------------------------------------------------ tessellate

/// Builds a block of optimal regions and optionally verifies it.
#[derive(Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct TessellateOpts {
    /// euclid or l1 [default: euclid].
    #[arg(long)]
    pub metric: Option<Metric>,
    /// Inbound ratio C/(cλ) [default: 0].
    #[arg(long)]
    pub r: Option<f64>,
    /// [default: 6]
    #[arg(long)]
    pub rows: Option<usize>,
    /// [default: 6]
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
    #[arg(long)]
    pub out_json: Option<PathBuf>,
    /// Sample count for the partition and cost checks; 0 skips them
    /// [default: 0].
    #[arg(long)]
    pub verify_samples: Option<usize>,
    /// Sampling seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Options for TessellateOpts {
    const NAME: &'static str = "tessellate";
    const SEEDED: bool = true;

    fn resolve(&mut self) -> Result<(), CliError> {
        self.metric.get_or_insert(Metric::Euclid);
        self.r.get_or_insert(0.0);
        self.rows.get_or_insert(6);
        self.cols.get_or_insert(6);
        self.verify_samples.get_or_insert(0);
        self.seed.get_or_insert(0);
        Ok(())
    }
}

pub fn tessellate(o: &TessellateOpts) -> Result<(), CliError> {
    let params = SystemParams::normalized(o.r.unwrap())?;
    let (t, design) = build(&params, o.metric.unwrap(), o.rows.unwrap(), o.cols.unwrap())?;
    let meta = metadata(o);
    if let Some(path) = &o.out_svg {
        export_geometry(&t, GeometryFormat::Svg, path, Some(&meta))?;
    }
    if let Some(path) = &o.out_json {
        export_geometry(&t, GeometryFormat::Json, path, Some(&meta))?;
    }
    say!(
        "{} regions ({} metric, r = {}), α = {:.4}°, ᾱ = {:.4}°, area per region {:.6}, analytic cost {:.6}",
        t.len(),
        t.metric,
        o.r.unwrap(),
        design.shape.alpha.to_degrees(),
        design.shape.alpha_bar.to_degrees(),
        design.density.area_per_facility,
        design.density.cost.total
    );
    let samples = o.verify_samples.unwrap();
    if samples == 0 {
        return Ok(());
    }
    let seed = o.seed.unwrap();
    let rep = validate_partition(&t, samples, seed);
    say!(
        "partition: {} samples, {} uncovered, {} overlapping, {} not nearest, {} structural",
        rep.samples,
        rep.uncovered,
        rep.overlapping,
        rep.not_nearest,
        rep.structural.len()
    );
    for s in &rep.structural {
        eprintln!("structural: {s}");
    }
    let mc = monte_carlo_cost(&t, &params, samples, seed)?;
    let rel = mc.cost.total / design.density.cost.total - 1.0;
    say!(
        "cost: Monte-Carlo {:.6} ± {:.6} vs analytic {:.6} ({:+.4}%)",
        mc.cost.total,
        mc.standard_error,
        design.density.cost.total,
        100.0 * rel
    );
    if !rep.is_valid() {
        return Err(CliError::Verification(format!(
            "{} partition violations",
            rep.violations()
        )));
    }
    if rel.abs() > MC_TOLERANCE {
        return Err(CliError::Verification(format!(
            "Monte-Carlo cost differs from the analytic optimum by {:.4}% (limit {}%)",
            100.0 * rel,
            100.0 * MC_TOLERANCE
        )));
    }
    Ok(())
}

// ------------------------------------------------------------ solve-grid

/// Grid location-routing instance flags shared by solve-grid and export-mip.
#[derive(Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct GridOpts {
    /// Grid dimension: M×M points at unit spacing.
    #[arg(long)]
    pub m: Option<usize>,
    /// Facility cost per open site.
    #[arg(long)]
    pub f: Option<f64>,
    /// Outbound cost per unit distance [default: 1].
    #[arg(long)]
    pub c: Option<f64>,
    /// Inbound tour cost per unit distance.
    #[arg(long = "C")]
    #[serde(rename = "C")]
    pub big_c: Option<f64>,
    /// euclid or l1 [default: euclid].
    #[arg(long)]
    pub metric: Option<Metric>,
    /// Grid index of the depot [default: 0].
    #[arg(long)]
    pub depot: Option<usize>,
}

impl GridOpts {
    fn resolve(&mut self) -> Result<(), CliError> {
        required(self.m, "m")?;
        required(self.f, "f")?;
        required(self.big_c, "C")?;
        self.c.get_or_insert(1.0);
        self.metric.get_or_insert(Metric::Euclid);
        self.depot.get_or_insert(0);
        Ok(())
    }

    fn instance(&self) -> Result<GridInstance, CliError> {
        Ok(GridInstance::new(
            self.m.unwrap(),
            self.f.unwrap(),
            self.c.unwrap(),
            self.big_c.unwrap(),
            self.metric.unwrap(),
            self.depot.unwrap(),
        )?)
    }
}

/// Simulated annealing (or the exhaustive oracle) on a grid instance.
#[derive(Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SolveGridOpts {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridOpts,
    /// First annealing seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent runs with seeds seed, seed+1, …; the best is kept
    /// [default: 1].
    #[arg(long)]
    pub restarts: Option<u64>,
    /// Starting temperature [default: 10% of the initial objective].
    #[arg(long)]
    pub t0: Option<f64>,
    /// Geometric cooling factor [default: 0.97].
    #[arg(long)]
    pub cooling: Option<f64>,
    /// Temperature steps [default: 400].
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Moves per temperature step [default: 50].
    #[arg(long)]
    pub moves: Option<usize>,
    /// Tour solver: auto, exact or heuristic [default: auto].
    #[arg(long, value_parser = parse_tours)]
    pub tours: Option<String>,
    /// Largest tour solved exactly under --tours auto [default: 10].
    #[arg(long)]
    pub exact_up_to: Option<usize>,
    /// Enumerate all facility sets instead of annealing (M ≤ 4).
    #[arg(long)]
    #[serde(default)]
    pub exhaustive: bool,
    /// Solution JSON, readable by measure-angles.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SolveGridOpts {
    fn schedule(&self) -> Schedule {
        let tours = match self.tours.as_deref() {
            Some("exact") => TourPolicy::Exact,
            Some("heuristic") => TourPolicy::Heuristic,
            _ => TourPolicy::Auto {
                exact_up_to: self.exact_up_to.unwrap(),
            },
        };
        Schedule {
            initial_temperature: self.t0,
            cooling: self.cooling.unwrap(),
            iterations: self.iterations.unwrap(),
            moves_per_temperature: self.moves.unwrap(),
            tours,
        }
    }
}

impl Options for SolveGridOpts {
    const NAME: &'static str = "solve-grid";
    const SEEDED: bool = true;

    fn resolve(&mut self) -> Result<(), CliError> {
        self.grid.resolve()?;
        let d = Schedule::default();
        self.seed.get_or_insert(0);
        self.restarts.get_or_insert(1);
        self.cooling.get_or_insert(d.cooling);
        self.iterations.get_or_insert(d.iterations);
        self.moves.get_or_insert(d.moves_per_temperature);
        self.tours.get_or_insert_with(|| "auto".into());
        self.exact_up_to.get_or_insert(10);
        if self.restarts == Some(0) {
            return Err(CliError::Usage("--restarts must be at least 1".into()));
        }
        if let Some(t) = self.tours.as_deref() {
            parse_tours(t).map_err(CliError::Usage)?;
        }
        Ok(self.schedule().validate()?)
    }
}

/// Instance and solution as stored by solve-grid.
#[derive(Serialize, Deserialize)]
struct SolutionFile {
    #[serde(default)]
    meta: Value,
    instance: GridInstance,
    solution: GridSolution,
}

fn print_solution(inst: &GridInstance, sol: &GridSolution) {
    let c = sol.objective;
    say!(
        "{}x{} grid, {} metric: objective {:.6} (facility {:.6}, outbound {:.6}, inbound {:.6})",
        inst.m,
        inst.m,
        inst.metric,
        c.total,
        c.facility,
        c.outbound,
        c.inbound
    );
    say!("{} open facilities: {:?}", sol.facilities.len(), sol.facilities);
    say!("tour: {:?}", sol.tour);
}

pub fn solve_grid(o: &SolveGridOpts) -> Result<(), CliError> {
    let inst = o.grid.instance()?;
    let meta = metadata(o);
    let (solution, extra) = if o.exhaustive {
        (exhaustive_optimum(&inst)?, json!({ "method": "exhaustive" }))
    } else {
        let first = o.seed.unwrap();
        let seeds: Vec<u64> = (0..o.restarts.unwrap()).map(|k| first.wrapping_add(k)).collect();
        let best = best_of_runs(&inst, &o.schedule(), &seeds)?;
        let extra = json!({
            "method": "annealing",
            "best_seed": best.seed,
            "evaluated_sets": best.evaluated_sets,
            "trace": best.trace,
        });
        (best.solution, extra)
    };
    let mut doc = serde_json::to_value(SolutionFile {
        meta,
        instance: inst.clone(),
        solution: solution.clone(),
    })
    .expect("solution serializes");
    if let Some(path) = &o.out {
        doc["search"] = extra.clone();
        write_json(path, &doc)?;
    }
    if extra["method"] == "annealing" {
        say!(
            "best of {} run(s): seed {}, {} facility sets evaluated",
            o.restarts.unwrap(),
            extra["best_seed"],
            extra["evaluated_sets"]
        );
    }
    print_solution(&inst, &solution);
    Ok(())
}

// -------------------------------------------------------- measure-angles

/// Basic angles of the Voronoi cells of a solve-grid solution.
#[derive(Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct MeasureAnglesOpts {
    /// Solution JSON written by solve-grid.
    #[arg(long)]
    pub solution: Option<PathBuf>,
    /// Per-cell CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Options for MeasureAnglesOpts {
    const NAME: &'static str = "measure-angles";

    fn resolve(&mut self) -> Result<(), CliError> {
        if self.solution.is_none() {
            return Err(CliError::Usage("missing required flag --solution".into()));
        }
        Ok(())
    }
}

pub fn measure_angles(o: &MeasureAnglesOpts) -> Result<(), CliError> {
    let path = o.solution.as_deref().unwrap();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let file: SolutionFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Io(format!("{}: malformed solution: {e}", path.display())))?;
    let rep = measure_basic_angles(&file.instance, &file.solution)?;
    if let Some(out) = &o.out {
        let mut w = create(out)?;
        rep.write_csv(&mut w, &preamble(&metadata(o)))
            .map_err(|e| io_error(out, e))?;
        finish(out, w)?;
    }
    say!(
        "{} interior facilities, {} measured; hexagonal share {:.2}; {} perpendicularity flags",
        rep.interior,
        rep.cells.len(),
        rep.hexagonal_fraction,
        rep.perpendicularity_flags
    );
    say!(
        "α = {:.2}° ± {:.2}°, ᾱ = {:.2}° ± {:.2}°",
        rep.mean_alpha_deg,
        rep.std_alpha_deg,
        rep.mean_alpha_bar_deg,
        rep.std_alpha_bar_deg
    );
    for w in &rep.warnings {
        eprintln!("warning: {w}");
    }
    let reference = match file.instance.metric {
        Metric::Euclid => REFERENCE_EUCLID,
        Metric::L1 => REFERENCE_L1,
    };
    let pair = |bar: Option<f64>, a: f64| match bar {
        Some(b) => format!("ᾱ {b}°, α {a}°"),
        None => format!("α {a}°"),
    };
    say!(
        "published {}x{} reference (comparison only): measured {}; theoretical {}",
        reference.m,
        reference.m,
        pair(reference.measured_alpha_bar_deg, reference.measured_alpha_deg),
        pair(reference.theoretical_alpha_bar_deg, reference.theoretical_alpha_deg)
    );
    Ok(())
}

// ------------------------------------------------------------ export-mip

/// Writes the location-routing model of a grid instance in LP format.
#[derive(Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExportMipOpts {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridOpts,
    /// LP file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Options for ExportMipOpts {
    const NAME: &'static str = "export-mip";

    fn resolve(&mut self) -> Result<(), CliError> {
        self.grid.resolve()?;
        if self.out.is_none() {
            return Err(CliError::Usage("missing required flag --out".into()));
        }
        Ok(())
    }
}

pub fn export_mip_cmd(o: &ExportMipOpts) -> Result<(), CliError> {
    let inst = o.grid.instance()?;
    let counts = export_mip(&inst, o.out.as_deref().unwrap(), &preamble(&metadata(o)))?;
    say!(
        "variables: {} X, {} Y, {} Z, {} u",
        counts.x_vars,
        counts.y_vars,
        counts.z_vars,
        counts.u_vars
    );
    say!(
        "rows: {} assignment, {} linking, {} in-degree, {} out-degree, {} subtour, {} depot ({} total)",
        counts.assignment_rows,
        counts.linking_rows,
        counts.in_degree_rows,
        counts.out_degree_rows,
        counts.mtz_rows,
        counts.depot_rows,
        counts.rows()
    );
    Ok(())
}

// ------------------------------------------------------------- inventory

/// Relative cost increase from EOQ inventory over grids of b and r.
#[derive(Args, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct InventoryOpts {
    /// Normalized order costs, comma-separated [default: 0.1,0.2,…,1].
    #[arg(long, value_delimiter = ',')]
    pub b: Option<Vec<f64>>,
    /// Normalized holding cost [default: 1].
    #[arg(long)]
    pub h: Option<f64>,
    /// Values of r, comma-separated [default: 0, 5/9, …, 5].
    #[arg(long, value_delimiter = ',')]
    pub r_grid: Option<Vec<f64>>,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Options for InventoryOpts {
    const NAME: &'static str = "inventory";

    fn resolve(&mut self) -> Result<(), CliError> {
        self.b
            .get_or_insert_with(|| (1..=10).map(|i| i as f64 / 10.0).collect());
        self.h.get_or_insert(1.0);
        self.r_grid
            .get_or_insert_with(|| (0..10).map(|i| 5.0 * i as f64 / 9.0).collect());
        Ok(())
    }
}

pub fn inventory(o: &InventoryOpts) -> Result<(), CliError> {
    let h = o.h.unwrap();
    let inv: Vec<InventoryParams> =
        o.b.as_ref()
            .unwrap()
            .iter()
            .map(|&b| InventoryParams::new(b, h))
            .collect::<Result<_, _>>()?;
    let rows = inventory_comparison(&SystemParams::normalized(0.0)?, &inv, o.r_grid.as_ref().unwrap())?;
    let write = |w: &mut dyn Write| -> io::Result<()> {
        for line in preamble(&metadata(o)) {
            writeln!(w, "# {line}")?;
        }
        writeln!(
            w,
            "bh,r,metric,g,cost_without,cost_with,area_without,area_with,difference_percent"
        )?;
        for row in &rows {
            writeln!(
                w,
                "{},{},{},{:.12},{:.12},{:.12},{:.12},{:.12},{:.6}",
                row.bh,
                row.r,
                row.metric,
                row.g,
                row.cost_without,
                row.cost_with,
                row.area_without,
                row.area_with,
                100.0 * row.relative_difference
            )?;
        }
        Ok(())
    };
    match &o.out {
        Some(path) => {
            let mut w = create(path)?;
            write(&mut w).map_err(|e| io_error(path, e))?;
            finish(path, w)?;
            let max = rows.iter().map(|r| r.relative_difference).fold(0.0, f64::max);
            say!("{} rows, largest difference {:.4}%", rows.len(), 100.0 * max);
        }
        None => write(&mut io::stdout().lock()).map_err(stdout_error)?,
    }
    Ok(())
}
