//! Command-line front end. Every verb produces one record that is rendered
//! either as line-oriented text or as a single JSON object.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bounds::{self, MFormula, Mode};
use crate::construct::{
    b_name, build_v, build_z, check_v_properties, e_name, mirror_triple_free, ConstructionResult, VReport,
};
use crate::enumerate::{enumerate_wicks, read_catalog, write_catalog, Catalog, EnumerateOptions};
use crate::represent::{
    count_representations, find_representations, genus_of_word_with, RepresentError, Representation, Substitution,
    WordGenus,
};
use crate::surface::{validate_wicks, WicksForm};
use crate::words::{first_square, square_free_status, thue_word, CyclicWord, Word};

/// Environment variable holding the worker count for `enumerate`, `count`
/// and catalog searches.
pub const WORKERS_ENV: &str = "WICKS_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "wicks", version, about = "Orientable Wicks forms: validation, enumeration, construction, counting")]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct WordInput {
    /// Word as signed integer tokens, e.g. "1 2 -1 -2".
    #[arg(value_name = "WORD", allow_hyphen_values = true, conflicts_with_all = ["word", "file"])]
    positional: Option<String>,
    /// Word as signed integer tokens.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "file")]
    word: Option<String>,
    /// File holding the word's tokens.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Wicks conditions; on success report genus and maximality.
    Validate(WordInput),
    /// Genus of a word: least genus of a form representing it.
    Genus {
        #[command(flatten)]
        input: WordInput,
        /// Highest genus searched.
        #[arg(long = "max", default_value_t = 2)]
        g_max: u32,
        /// Complete catalog files to use instead of enumerating.
        #[arg(long)]
        catalog: Vec<PathBuf>,
        #[arg(long)]
        allow_long: bool,
    },
    /// Enumerate forms of one genus up to isomorphism.
    Enumerate {
        #[arg(long)]
        genus: u32,
        /// Only forms of length 12g-6.
        #[arg(long)]
        maximal: bool,
        #[arg(long)]
        min_length: Option<usize>,
        #[arg(long)]
        max_length: Option<usize>,
        /// Accept genus 3 and above.
        #[arg(long)]
        allow_long: bool,
        /// Catalog file to write; the catalog is printed otherwise.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build v (and optionally z) from a maximal form.
    Construct {
        /// Maximal form as signed integer tokens.
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// Also build the square-free variant z.
        #[arg(long)]
        squarefree: bool,
    },
    /// Square-freeness checks and Thue words.
    Squarefree {
        /// Check this word.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["thue", "form"])]
        word: Option<String>,
        /// Treat the word cyclically.
        #[arg(long, requires = "word")]
        cyclic: bool,
        /// Print the Thue word of this length over {1, 2, 3}.
        #[arg(long, conflicts_with = "form")]
        thue: Option<usize>,
        /// Build z from this maximal form.
        #[arg(long, allow_hyphen_values = true)]
        form: Option<String>,
    },
    /// Non-cancelling representations of a word by a form or a catalog.
    Represent {
        #[command(flatten)]
        input: WordInput,
        /// Single form to represent the word by.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "catalog")]
        form: Option<String>,
        /// Catalog file; counts the classes representing the word.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Print only the class count.
        #[arg(long, requires = "catalog")]
        count_only: bool,
        /// Most representations listed per form.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// M(g, w): maximal genus-g classes representing the word.
    Count {
        #[command(flatten)]
        input: WordInput,
        #[arg(long)]
        genus: u32,
        /// Maximal catalog file; enumerated when absent.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        allow_long: bool,
    },
    /// Counting formulas and the factorial inequality.
    Bounds {
        #[arg(long, required_unless_present = "threshold")]
        genus: Option<u64>,
        /// Decide with exact integers.
        #[arg(long, conflicts_with = "threshold")]
        exact: bool,
        /// Print m(g), |V(g)|, |Z(g)| exactly.
        #[arg(long, conflicts_with = "threshold")]
        formulas: bool,
        /// Starting precision of the certified-log mode.
        #[arg(long, default_value_t = bounds::DEFAULT_DIGITS)]
        digits: u32,
        /// Search for the least genus at which the inequality is certified.
        #[arg(long)]
        threshold: bool,
        /// Use (3g-2)! in the denominator of m(g).
        #[arg(long)]
        factorial_m: bool,
    },
}

/// Result of one verb: shared data, its text rendering, and the exit code.
struct Record {
    json: Value,
    text: String,
    code: i32,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain(e: impl ToString) -> Failure {
    Failure::Domain(e.to_string())
}

/// Parses `args` (including the program name), runs the verb and writes its
/// output. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let workers = match workers_from_env() {
        Ok(w) => w,
        Err(f) => return report_failure(&f, cli.json, err),
    };
    match execute(&cli.command, workers) {
        Ok(rec) => {
            let _ = if cli.json {
                writeln!(out, "{}", rec.json)
            } else {
                writeln!(out, "{}", rec.text)
            };
            rec.code
        }
        Err(f) => report_failure(&f, cli.json, err),
    }
}

fn report_failure(f: &Failure, json: bool, err: &mut dyn Write) -> i32 {
    let _ = if json {
        writeln!(err, "{}", json!({ "error": f.message(), "exit": f.code() }))
    } else {
        writeln!(err, "error: {}", f.message())
    };
    f.code()
}

fn workers_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(usage(format!("{WORKERS_ENV} must be a positive integer, got `{s}`"))),
        },
    }
}

fn parse_word(s: &str) -> Result<Word, Failure> {
    s.parse::<Word>().map_err(usage)
}

fn read_word(input: &WordInput) -> Result<Word, Failure> {
    match (&input.positional, &input.word, &input.file) {
        (Some(s), _, _) | (_, Some(s), _) => parse_word(s),
        (_, _, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            parse_word(&text)
        }
        _ => Err(usage("a word is required: pass it as WORD, --word or --file")),
    }
}

fn load_catalog(path: &PathBuf) -> Result<Catalog, Failure> {
    read_catalog(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn execute(cmd: &Command, workers: Option<usize>) -> Result<Record, Failure> {
    match cmd {
        Command::Validate(input) => validate(&read_word(input)?),
        Command::Genus { input, g_max, catalog, allow_long } => {
            genus(&read_word(input)?, *g_max, catalog, *allow_long, workers)
        }
        Command::Enumerate { genus, maximal, min_length, max_length, allow_long, output } => {
            let range = match (min_length, max_length) {
                (None, None) => None,
                (a, b) if !*maximal => Some((
                    a.unwrap_or(crate::enumerate::min_length(*genus)),
                    b.unwrap_or(crate::enumerate::max_length((*genus).max(1))),
                )),
                _ => return Err(usage("--maximal fixes the length; drop --min-length/--max-length")),
            };
            let opts = EnumerateOptions { length_range: range, allow_long: *allow_long, workers };
            enumerate(*genus, *maximal, &opts, output.as_ref())
        }
        Command::Construct { form, squarefree } => construct(&parse_word(form)?, *squarefree),
        Command::Squarefree { word, cyclic, thue, form } => match (word, thue, form) {
            (Some(w), None, None) => squarefree_check(&parse_word(w)?, *cyclic),
            (None, Some(n), None) => Ok(thue_record(*n)),
            (None, None, Some(f)) => squarefree_form(&parse_word(f)?),
            _ => Err(usage("squarefree needs exactly one of --word, --thue, --form")),
        },
        Command::Represent { input, form, catalog, count_only, limit } => {
            let w = CyclicWord::new(read_word(input)?);
            match (form, catalog) {
                (Some(u), None) => represent_form(&w, &CyclicWord::new(parse_word(u)?), *limit),
                (None, Some(path)) => represent_catalog(&w, &load_catalog(path)?, *count_only, workers),
                _ => Err(usage("represent needs --form or --catalog")),
            }
        }
        Command::Count { input, genus, catalog, allow_long } => {
            let w = CyclicWord::new(read_word(input)?);
            let cat = match catalog {
                Some(path) => load_catalog(path)?,
                None => {
                    let opts = EnumerateOptions { length_range: None, allow_long: *allow_long, workers };
                    enumerate_wicks(*genus, true, &opts).map_err(domain)?
                }
            };
            if cat.genus != *genus || !cat.maximal_only {
                return Err(usage(format!("catalog must hold maximal forms of genus {genus}")));
            }
            represent_catalog(&w, &cat, true, workers)
        }
        Command::Bounds { genus, exact, formulas, digits, threshold, factorial_m } => {
            let formula = if *factorial_m { MFormula::Factorial } else { MFormula::Printed };
            if *threshold {
                bounds_threshold(*digits, formula)
            } else {
                bounds_check(genus.expect("required by clap"), *exact, *formulas, *digits, formula)
            }
        }
    }
}

fn flag(b: bool) -> u8 {
    u8::from(b)
}

fn tokens(w: &Word) -> Vec<i32> {
    w.to_signed()
}

fn validate(w: &Word) -> Result<Record, Failure> {
    let cw = CyclicWord::new(w.clone());
    let report = validate_wicks(&cw);
    if !report.is_pass() {
        // Positions refer to the stored least rotation; report them as given.
        let own = crate::surface::validate_word(w);
        let violations: Vec<Value> = own
            .violations
            .iter()
            .map(|v| json!({ "condition": v.condition.id(), "position": v.position }))
            .collect();
        let text = own
            .violations
            .iter()
            .map(|v| format!("FAIL {} {}", v.condition.id(), v.position))
            .collect::<Vec<_>>()
            .join("\n");
        return Ok(Record { json: json!({ "pass": false, "violations": violations }), text, code: 1 });
    }
    let form = WicksForm::new(cw).map_err(domain)?;
    let (g, maximal) = (form.genus(), form.is_maximal());
    let graph = form.graph();
    Ok(Record {
        json: json!({
            "pass": true,
            "genus": g,
            "maximal": maximal,
            "vertices": graph.vertex_count(),
            "edges": graph.edge_count(),
        }),
        text: format!(
            "PASS genus={g} maximal={}\nvertices={} edges={}",
            flag(maximal),
            graph.vertex_count(),
            graph.edge_count()
        ),
        code: 0,
    })
}

fn genus(
    w: &Word,
    g_max: u32,
    catalogs: &[PathBuf],
    allow_long: bool,
    workers: Option<usize>,
) -> Result<Record, Failure> {
    let mut loaded = Vec::new();
    for path in catalogs {
        loaded.push(load_catalog(path)?);
    }
    if g_max > crate::enumerate::MAX_QUICK_GENUS
        && !allow_long
        && (3..=g_max).any(|g| !loaded.iter().any(|c| c.genus == g))
    {
        return Err(domain(RepresentError::NeedsOverride(g_max)));
    }
    let opts = EnumerateOptions { length_range: None, allow_long, workers };
    let result = genus_of_word_with(&CyclicWord::new(w.clone()), g_max, workers, |g| {
        match loaded.iter().find(|c| c.genus == g) {
            Some(c) => Ok(c.clone()),
            None => Ok(enumerate_wicks(g, false, &opts)?),
        }
    })
    .map_err(domain)?;
    let json = match result {
        WordGenus::Finite(g) => json!({ "result": "finite", "genus": g }),
        WordGenus::Exceeds(g) => json!({ "result": "exceeds", "genus": g }),
        WordGenus::Infinite => json!({ "result": "infinite" }),
    };
    Ok(Record { json, text: result.to_string(), code: 0 })
}

fn catalog_json(cat: &Catalog, with_forms: bool) -> Value {
    let mut v = json!({
        "genus": cat.genus,
        "maximal": cat.maximal_only,
        "complete": cat.complete,
        "count": cat.len(),
    });
    if with_forms {
        v["forms"] = cat.forms().iter().map(|f| json!(tokens(f.word()))).collect();
    }
    v
}

fn enumerate(
    genus: u32,
    maximal: bool,
    opts: &EnumerateOptions,
    output: Option<&PathBuf>,
) -> Result<Record, Failure> {
    let cat = enumerate_wicks(genus, maximal, opts).map_err(domain)?;
    match output {
        None => {
            let text = cat.to_text();
            Ok(Record { json: catalog_json(&cat, true), text: text.trim_end().to_string(), code: 0 })
        }
        Some(path) => {
            write_catalog(path, &cat).map_err(|e| domain(format!("{}: {e}", path.display())))?;
            let mut json = catalog_json(&cat, false);
            json["path"] = json!(path.display().to_string());
            Ok(Record { json, text: format!("{}\npath={}", cat.header(), path.display()), code: 0 })
        }
    }
}

fn substitution_json(s: &Substitution) -> Value {
    let map: serde_json::Map<String, Value> = s.iter().map(|(b, w)| (b.to_string(), json!(tokens(w)))).collect();
    Value::Object(map)
}

fn v_report_json(r: &VReport) -> Value {
    json!({
        "pass": r.is_pass(),
        "genus": r.genus,
        "violations": r
            .violations
            .iter()
            .map(|v| json!({ "condition": v.condition.id(), "position": v.position }))
            .collect::<Vec<_>>(),
    })
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn construction(form: &Word) -> Result<ConstructionResult, Failure> {
    let wf = WicksForm::new(CyclicWord::new(form.clone())).map_err(domain)?;
    build_v(&wf).map_err(domain)
}

fn construct(form: &Word, squarefree: bool) -> Result<Record, Failure> {
    let res = construction(form)?;
    let report = check_v_properties(&res.circuit).map_err(domain)?;
    let v = res.v();
    let mirror_free = mirror_triple_free(&v);
    let represented = !find_representations(&v, &res.form, Some(1)).map_err(domain)?.is_empty();

    let mut ids: Vec<u32> = res.circuit.iter().map(|l| l.base()).collect();
    ids.sort_unstable();
    ids.dedup();
    let legend: Vec<(u32, String)> = ids
        .iter()
        .map(|&id| (id, b_name(crate::words::Letter::new(id, true)).expect("letter of B")))
        .collect();

    let mut text = vec![
        report.to_string(),
        format!("v: {}", res.circuit),
        format!("form: {}", Word::new(res.form.letters().to_vec())),
        format!("coloring: {}", join(res.coloring.as_slice())),
        format!("pairing: {}", join(&res.pairing)),
        format!("mirror_triple_free={} represented={}", flag(mirror_free), flag(represented)),
        "phi:".to_string(),
        res.phi.to_string(),
        "legend:".to_string(),
    ];
    text.extend(legend.iter().map(|(id, name)| format!("{id} {name}")));
    let mut json = json!({
        "report": v_report_json(&report),
        "v": tokens(&res.circuit),
        "form": tokens(res.form.word()),
        "coloring": res.coloring.as_slice(),
        "pairing": res.pairing,
        "mirror_triple_free": mirror_free,
        "represented": represented,
        "phi": substitution_json(&res.phi),
        "legend": legend.iter().map(|(id, name)| json!({ "id": id, "name": name })).collect::<Vec<_>>(),
    });
    let mut ok = report.is_pass() && mirror_free && represented;
    if squarefree {
        let (zjson, ztext, zok) = squarefree_block(&res)?;
        json["squarefree"] = zjson;
        text.push(ztext);
        ok &= zok;
    }
    Ok(Record { json, text: text.join("\n"), code: if ok { 0 } else { 1 } })
}

fn squarefree_block(res: &ConstructionResult) -> Result<(Value, String, bool), Failure> {
    let sf = build_z(res).map_err(domain)?;
    let zc = sf.z_cyclic();
    let square_free = square_free_status(&sf.z, true);
    let mirror_free = mirror_triple_free(&zc);
    let named: Vec<(u32, String)> = sf
        .legend
        .iter()
        .map(|e| (e.id, e_name(crate::words::Letter::new(e.id, true)).expect("letter of the square-free alphabet")))
        .collect();
    let mut text = vec![
        format!("z: {}", sf.z),
        format!("square_free={} mirror_triple_free={}", flag(square_free), flag(mirror_free)),
        "z_phi:".to_string(),
        sf.phi.to_string(),
        "z_legend:".to_string(),
    ];
    text.extend(named.iter().map(|(id, name)| format!("{id} {name}")));
    let json = json!({
        "z": tokens(&sf.z),
        "pairing": sf.pairing,
        "square_free": square_free,
        "mirror_triple_free": mirror_free,
        "phi": substitution_json(&sf.phi),
        "legend": sf
            .legend
            .iter()
            .zip(&named)
            .map(|(e, (_, name))| json!({ "id": e.id, "b_base": e.b_base, "variant": e.variant, "name": name }))
            .collect::<Vec<_>>(),
    });
    let mut text = text.join("\n");
    text.push_str(&format!("\nz_pairing: {}", join(&sf.pairing)));
    Ok((json, text, square_free && mirror_free))
}

fn squarefree_check(w: &Word, cyclic: bool) -> Result<Record, Failure> {
    let letters = w.letters();
    let square = if cyclic && !letters.is_empty() {
        let doubled: Vec<_> = letters.iter().chain(letters).copied().collect();
        first_square(&doubled, letters.len() / 2)
    } else {
        first_square(letters, letters.len() / 2)
    };
    debug_assert_eq!(square.is_none(), square_free_status(w, cyclic));
    let (json, text) = match square {
        None => (json!({ "square_free": true, "cyclic": cyclic }), format!("square_free=1 cyclic={}", flag(cyclic))),
        Some((start, half)) => (
            json!({ "square_free": false, "cyclic": cyclic, "start": start, "half": half }),
            format!("square_free=0 cyclic={} start={start} half={half}", flag(cyclic)),
        ),
    };
    Ok(Record { json, text, code: if square.is_none() { 0 } else { 1 } })
}

fn thue_record(n: usize) -> Record {
    let w = thue_word(n);
    Record {
        json: json!({ "length": n, "word": tokens(&w) }),
        text: format!("length={n}\n{w}"),
        code: 0,
    }
}

fn squarefree_form(form: &Word) -> Result<Record, Failure> {
    let res = construction(form)?;
    let (json, text, ok) = squarefree_block(&res)?;
    Ok(Record { json, text, code: if ok { 0 } else { 1 } })
}

fn representation_json(r: &Representation) -> Value {
    json!({ "offset": r.offset, "substitution": substitution_json(&r.substitution) })
}

fn represent_form(w: &CyclicWord, u: &CyclicWord, limit: Option<usize>) -> Result<Record, Failure> {
    let reps = find_representations(w, u, limit).map_err(domain)?;
    let mut text = vec![format!("count={}", reps.len())];
    text.extend(reps.iter().map(|r| r.to_string()));
    Ok(Record {
        json: json!({
            "form": tokens(u.word()),
            "count": reps.len(),
            "representations": reps.iter().map(representation_json).collect::<Vec<_>>(),
        }),
        text: text.join("\n"),
        code: if reps.is_empty() { 1 } else { 0 },
    })
}

fn represent_catalog(w: &CyclicWord, cat: &Catalog, count_only: bool, workers: Option<usize>) -> Result<Record, Failure> {
    let rc = count_representations(w, cat, workers);
    let m_line = if rc.exact { format!("M={}", rc.count) } else { format!("M>={}", rc.count) };
    let mut json = json!({ "genus": cat.genus, "M": rc.count, "exact": rc.exact });
    let mut text = vec![m_line];
    if !count_only {
        let mut forms = Vec::new();
        for u in cat.forms() {
            if let Some(r) = find_representations(w, u, Some(1)).map_err(domain)?.into_iter().next() {
                text.push(format!("form: {u}"));
                text.push(r.to_string());
                forms.push(json!({ "form": tokens(u.word()), "witness": representation_json(&r) }));
            }
        }
        json["forms"] = Value::Array(forms);
    }
    Ok(Record { json, text: text.join("\n"), code: 0 })
}

fn sci_pair(b: &bounds::LogBound) -> (String, String) {
    b.to_sci(12)
}

fn formula_name(f: MFormula) -> &'static str {
    match f {
        MFormula::Printed => "printed",
        MFormula::Factorial => "factorial",
    }
}

fn bounds_check(g: u64, exact: bool, show_formulas: bool, digits: u32, formula: MFormula) -> Result<Record, Failure> {
    let check = if exact {
        bounds::check_bound_with(g, Mode::exact(), formula)
    } else {
        bounds::check_bound_auto(g, digits, bounds::MAX_DIGITS, formula)
    }
    .map_err(domain)?;
    let (lo, hi) = sci_pair(&check.margin);
    let mode = if exact { "exact" } else { "certified_log" };
    let mut json = json!({
        "genus": g,
        "mode": mode,
        "formula": formula_name(formula),
        "verdict": check.verdict.to_string(),
        "margin": { "lower": lo, "upper": hi },
    });
    let mut text = vec![
        format!("genus={g} mode={mode} formula={}", formula_name(formula)),
        format!("verdict={}", check.verdict),
        format!("margin=[{lo}, {hi}]"),
    ];
    if let Mode::CertifiedLog { digits } = check.mode {
        json["digits"] = json!(digits);
        text.push(format!("digits={digits}"));
    }
    if show_formulas {
        let f = bounds::formulas_with(g, formula, bounds::DEFAULT_FACTORIAL_BUDGET).map_err(domain)?;
        json["m"] = json!(f.m.to_string());
        json["V"] = json!(f.v.to_string());
        json["Z"] = json!(f.z.to_string());
        text.push(format!("m={}", f.m));
        text.push(format!("V={}", f.v));
        text.push(format!("Z={}", f.z));
    }
    Ok(Record { json, text: text.join("\n"), code: 0 })
}

fn bounds_threshold(digits: u32, formula: MFormula) -> Result<Record, Failure> {
    let t = bounds::minimal_threshold(digits, formula).map_err(domain)?;
    Ok(Record {
        json: json!({
            "threshold": t.g,
            "formula": formula_name(formula),
            "digits": digits,
            "probes": t.probes.len(),
            "monotone": t.monotone,
        }),
        text: format!(
            "threshold={} formula={} digits={digits}\nprobes={} monotone={}",
            t.g,
            formula_name(formula),
            t.probes.len(),
            flag(t.monotone)
        ),
        code: 0,
    })
}
