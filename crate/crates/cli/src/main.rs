//! `orbibraid` command line.
//!
//! Exit codes: 0 success / all properties hold, 1 a property failed,
//! 2 usage or input error.

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use orbibraid::arrangement::{analyse, Arrangement, DEFAULT_MAX_FLATS};
use orbibraid::groupoid::{
    a_to_b, check_axioms, check_hom, forget_hom_a, forget_hom_b, is_b_fibration_discrete,
    is_free_action, pb_a, pb_b, translation_groupoid, translation_to_pb_b, FiniteGroupoid,
    GroupAction, GroupoidTables,
};
use orbibraid::orbifold::{conjugation_table, kernel_word};
use orbibraid::verify::{self, Params};
use orbibraid::{OrbWord, Surface};

/// Version of every JSON document this binary emits.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "orbibraid",
    version,
    about = "Orbifold braid groups: combing, verification suites, groupoids and arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SurfaceArgs {
    /// Number of punctures.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Number of cone points; must match the length of --q when both are given.
    #[arg(long)]
    m: Option<usize>,
    /// Cone point orders, comma separated (e.g. 2,3).
    #[arg(long, value_delimiter = ',')]
    q: Vec<u32>,
}

impl SurfaceArgs {
    fn surface(&self) -> anyhow::Result<Surface> {
        if let Some(m) = self.m {
            if m != self.q.len() {
                bail!(
                    "--m {m} does not match the {} orders given with --q",
                    self.q.len()
                );
            }
        }
        Ok(Surface::new(self.k, self.q.clone())?)
    }

    fn given(&self) -> bool {
        self.k != 0 || self.m.is_some() || !self.q.is_empty()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Combing normal form of a pure orbifold braid word.
    NormalForm {
        /// Word such as "B[1,2] X[1,1]^2"; omit to read --file.
        word: Option<String>,
        #[arg(long)]
        file: Option<String>,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run a seeded property suite.
    Verify(VerifyArgs),
    /// Conjugation table of the kernel basis.
    ConjTable {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        json: bool,
    },
    /// Falk pattern and supersolvability of D^k_n or the braid arrangement.
    Arrangement {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Use the braid arrangement z_i = z_j instead of D^k_n.
        #[arg(long)]
        braid: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_FLATS)]
        max_flats: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check a groupoid or group action given as JSON (file path or "-").
    Groupoid {
        file: String,
        /// Configuration level for actions.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: esg-splitting, torsion, fnf, normality, classical, polyvf,
    /// groupoid-axioms, falk, supersolvable.
    suite: String,
    /// Strand count (or arrangement dimension for falk / supersolvable).
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 4)]
    word_len: usize,
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    #[arg(long, default_value_t = 1)]
    max_k: usize,
    /// Cone points in sweeps; for groupoid-axioms, the bound on |M|.
    #[arg(long)]
    max_m: Option<usize>,
    #[arg(long, default_value_t = 12)]
    max_d: i64,
    #[arg(long, default_value_t = 4)]
    max_group: usize,
    #[arg(long, default_value_t = 50)]
    instances: usize,
    #[arg(long)]
    json: bool,
}

/// Failure kinds mapped onto exit codes.
enum Failure {
    Property,
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<orbibraid::Error> for Failure {
    fn from(e: orbibraid::Error) -> Self {
        Failure::Usage(e.into())
    }
}

fn emit(doc: Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(&doc).expect("plain data");
    // a closed pipe (e.g. `| head`) is not an error worth a panic
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn envelope(command: &str, body: Value) -> Value {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc
}

fn surface_json(s: &Surface) -> Value {
    json!({ "k": s.punctures(), "q": s.cone_orders() })
}

fn read_source(word: Option<String>, file: Option<String>) -> anyhow::Result<String> {
    match (word, file) {
        (Some(w), None) => Ok(w),
        (None, Some(path)) => read_path(&path),
        (Some(_), Some(_)) => bail!("give the word either as an argument or with --file, not both"),
        (None, None) => bail!("no word given"),
    }
}

fn read_path(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn normal_form(src: &str, n: usize, surface: &Surface, as_json: bool) -> Result<(), Failure> {
    let w = OrbWord::parse(src.trim(), surface, n)?;
    let combed = w.comb()?;
    let identity = combed.is_identity();
    if as_json {
        let coords: serde_json::Map<String, Value> = (1..=n)
            .rev()
            .zip(combed.levels())
            .map(|(level, syl)| (format!("u{level}"), json!(syl)))
            .collect();
        emit(envelope(
            "normal-form",
            json!({
                "surface": surface_json(surface),
                "n": n,
                "word": w.to_string(),
                "coordinates": coords,
                "identity": identity,
            }),
        ));
    } else {
        println!("{combed}");
        println!(
            "verdict: {}",
            if identity { "identity" } else { "not identity" }
        );
    }
    Ok(())
}

fn run_verify(a: VerifyArgs) -> Result<(), Failure> {
    let fixed_surface = a.surface.given().then(|| a.surface.surface()).transpose()?;
    let groupoid = a.suite == "groupoid-axioms";
    let params = Params {
        surface: fixed_surface,
        strands: a.n,
        cases: a.cases,
        word_len: a.word_len,
        seed: a.seed,
        max_strands: a.max_n,
        max_k: a.max_k,
        max_m: if groupoid { 1 } else { a.max_m.unwrap_or(1) },
        max_d: a.max_d,
        max_points: if groupoid { a.max_m.unwrap_or(8) } else { 8 },
        max_group: a.max_group,
        instances: a.instances,
        arrangement_k: (a.suite == "falk")
            .then_some(a.surface.k as u32)
            .filter(|&k| k > 0),
    };
    let reports = verify::run(&a.suite, &params)?;
    let passed = reports.iter().all(|r| r.passed());
    if a.json {
        emit(envelope(
            "verify",
            json!({ "suite": a.suite, "seed": a.seed, "passed": passed, "reports": reports }),
        ));
    } else {
        for r in &reports {
            print!("{r}");
        }
        println!(
            "{}",
            if passed {
                "all checks passed"
            } else {
                "some checks FAILED"
            }
        );
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn conj_table(n: usize, surface: &Surface, as_json: bool) -> Result<(), Failure> {
    let table = conjugation_table(surface, n)?;
    if as_json {
        let entries: Vec<Value> = table
            .entries
            .iter()
            .map(|e| {
                json!({
                    "conjugator": e.conjugator.to_string(),
                    "basis": e.basis.to_string(),
                    "value": kernel_word(surface, n, n, &e.value).to_string(),
                })
            })
            .collect();
        let violations: Vec<Value> = table
            .violations
            .iter()
            .map(|v| json!({ "conjugator": v.conjugator.to_string(), "basis": v.basis.to_string(), "message": v.message }))
            .collect();
        emit(envelope(
            "conj-table",
            json!({
                "surface": surface_json(surface),
                "n": n,
                "complete": table.is_complete(),
                "entries": entries,
                "violations": violations,
            }),
        ));
    } else {
        for e in &table.entries {
            println!(
                "{} {} {} = {}",
                e.conjugator,
                e.basis,
                e.conjugator.inverted(),
                kernel_word(surface, n, n, &e.value)
            );
        }
        for v in &table.violations {
            println!(
                "VIOLATION {} {} {}: {}",
                v.conjugator,
                v.basis,
                v.conjugator.inverted(),
                v.message
            );
        }
    }
    if table.is_complete() {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn arrangement(
    n: usize,
    k: u32,
    braid: bool,
    max_flats: usize,
    as_json: bool,
) -> Result<(), Failure> {
    let a = if braid {
        Arrangement::braid(n)?
    } else {
        Arrangement::dnk(n, k)?
    };
    let rep = analyse(&a, max_flats)?;
    if as_json {
        let mut body = serde_json::to_value(&rep).expect("plain data");
        if let Value::Object(m) = &mut body {
            m.insert(
                "arrangement".into(),
                json!(if braid { "braid" } else { "dnk" }),
            );
        }
        emit(envelope("arrangement", body));
    } else {
        let name = if braid {
            format!("braid arrangement, n={n}")
        } else {
            format!("D^{k}_{n}")
        };
        println!("{name}: {} hyperplanes", rep.hyperplane_count);
        match &rep.falk_witness {
            Some(w) => println!(
                "falk witness at (a,b,c,d) = {:?}: {}",
                w.indices,
                w.rendered.join(", ")
            ),
            None => println!("falk witness: none"),
        }
        println!("supersolvable: {}", rep.supersolvable);
        if let Some(chain) = &rep.chain {
            for f in chain {
                let hs: Vec<String> = f.hyperplanes.iter().map(|h| h.render(rep.k)).collect();
                println!("  rank {}: {{{}}}", f.rank, hs.join(", "));
            }
        }
    }
    Ok(())
}

struct Checks {
    map: serde_json::Map<String, Value>,
    passed: bool,
}

impl Default for Checks {
    fn default() -> Self {
        Self {
            map: serde_json::Map::new(),
            passed: true,
        }
    }
}

impl Checks {
    fn put(&mut self, name: &str, ok: bool, detail: Value) {
        self.passed &= ok;
        self.map
            .insert(name.to_string(), json!({ "ok": ok, "detail": detail }));
    }
}

fn groupoid(path: &str, n: usize, as_json: bool) -> Result<(), Failure> {
    let text = read_path(path)?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| anyhow!("bad JSON: {e}"))?;
    let mut checks = Checks::default();
    if raw.get("compose").is_some() {
        let tables: GroupoidTables =
            serde_json::from_value(raw).map_err(|e| anyhow!("bad groupoid tables: {e}"))?;
        let g = FiniteGroupoid::from_tables(tables)?;
        let r = check_axioms(&g);
        checks.put("axioms", r.is_ok(), json!(r.violations));
    } else {
        let act = GroupAction::from_json(&text)?;
        let g = translation_groupoid(&act);
        let r = check_axioms(&g);
        checks.put("translation-axioms", r.is_ok(), json!(r.violations));
        let free = is_free_action(&act);
        checks.map.insert("free-action".into(), json!(free));
        for level in 1..=n {
            let r = check_axioms(&pb_a(&g, level)?);
            checks.put(
                &format!("pb_a[{level}]-axioms"),
                r.is_ok(),
                json!(r.violations),
            );
            let r = check_axioms(&pb_b(&g, level)?);
            checks.put(
                &format!("pb_b[{level}]-axioms"),
                r.is_ok(),
                json!(r.violations),
            );
            let r = check_hom(&a_to_b(&g, level)?);
            checks.put(
                &format!("a_to_b[{level}]-hom"),
                r.is_ok(),
                json!(r.violations),
            );
            let iso = translation_to_pb_b(&act, level)?;
            let r = check_hom(&iso);
            checks.put(
                &format!("configuration-iso[{level}]"),
                r.is_ok() && iso.is_bijective(),
                json!({ "bijective": iso.is_bijective(), "violations": r.violations }),
            );
            if level >= 2 {
                let r = check_hom(&forget_hom_a(&g, level)?);
                checks.put(
                    &format!("forget_a[{level}]-hom"),
                    r.is_ok(),
                    json!(r.violations),
                );
                let fb = forget_hom_b(&g, level)?;
                let r = check_hom(&fb);
                checks.put(
                    &format!("forget_b[{level}]-hom"),
                    r.is_ok(),
                    json!(r.violations),
                );
                let fib = is_b_fibration_discrete(&fb);
                let detail = json!({ "surjective": fib.surjective, "witness": fib.witness });
                if free {
                    checks.put(
                        &format!("forget_b[{level}]-b-fibration"),
                        fib.surjective,
                        detail,
                    );
                } else {
                    // reported only: no expectation without a free action
                    checks.map.insert(
                        format!("forget_b[{level}]-b-fibration"),
                        json!({ "ok": null, "detail": detail }),
                    );
                }
            }
        }
    }
    let Checks {
        map: checks,
        passed,
    } = checks;
    if as_json {
        emit(envelope(
            "groupoid",
            json!({ "passed": passed, "checks": checks }),
        ));
    } else {
        for (name, v) in &checks {
            let status = match v.get("ok") {
                Some(Value::Bool(true)) => "ok",
                Some(Value::Bool(false)) => "FAILED",
                Some(_) => "reported",
                None => {
                    if v.as_bool() == Some(true) {
                        "yes"
                    } else {
                        "no"
                    }
                }
            };
            println!("{name:<28} {status}");
            if status == "FAILED" {
                println!("    {}", v["detail"]);
            }
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::NormalForm {
            word,
            file,
            n,
            surface,
            json,
        } => {
            let src = read_source(word, file)?;
            normal_form(&src, n, &surface.surface()?, json)
        }
        Command::Verify(a) => run_verify(a),
        Command::ConjTable { n, surface, json } => conj_table(n, &surface.surface()?, json),
        Command::Arrangement {
            n,
            k,
            braid,
            max_flats,
            json,
        } => arrangement(n, k, braid, max_flats, json),
        Command::Groupoid { file, n, json } => groupoid(&file, n, json),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
