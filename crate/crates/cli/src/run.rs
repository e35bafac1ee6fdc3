//! Statement execution and the report it produces.

use std::collections::HashMap;
use std::fmt;
use std::time::Instant;

use indsheaf::extend::{check_mv, extend, PresheafOnT};
use indsheaf::indcat::{
    alpha, beta, beta_closed, beta_closed_counit, beta_open, beta_open_counit, cokernel,
    free_growth, hom_from_sheaf_with, hom_ind_with, iota, is_exact, is_ind_zero_with, is_iso,
    kernel, receding_rays, Dim, IndMorphism, PeriodCert, Rule, SeqSystem, Tag, Verdict,
};
use indsheaf::linalg::{Field, LinearMap};
use indsheaf::sheaf::{direct_image, inverse_image, proper_direct_image, Sheaf, SheafMorphism};
use indsheaf::sixops::{
    base_change_check, direct_image_ind, hom_presheaf, ihom_ind, inverse_image_ind,
    open_embedding_comparison, projection_formula_check, proper_comparison,
    proper_direct_image_ind, restrict, tensor_ind, CartesianSquare,
};
use indsheaf::space::{CellMap, CellSet, FinitePoset, LocallyClosedSet, MapKind, OpenSet, Space};

use crate::dsl::{Expr, Script, Stmt};
use crate::error::{CliError, Result};
use crate::format::{self, DimRecord, Object};
use crate::suites;

/// Settings shared by every statement of a run.
#[derive(Clone, Debug)]
pub struct Config {
    pub field: Field,
    pub trunc: usize,
    pub seed: u64,
    /// Append wall-clock times to records. Off by default, since times
    /// differ between runs.
    pub timings: bool,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            field: Field::Rationals,
            trunc: indsheaf::indcat::DEFAULT_TRUNCATION,
            seed: 0,
            timings: false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Value {
    Int(i64),
    Str(String),
    List(Vec<Value>),
    Space(Space),
    Open(OpenSet),
    Closed(CellSet),
    Lc(LocallyClosedSet),
    Sheaf(Sheaf),
    Ind(SeqSystem),
    Map(CellMap),
    Morphism(IndMorphism),
    Presheaf(PresheafOnT),
    /// The answer to a query; `ok` is false for a failed check.
    Answer {
        text: String,
        ok: bool,
    },
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Str(_) => "string",
            Value::List(_) => "list",
            Value::Space(_) => "space",
            Value::Open(_) => "open set",
            Value::Closed(_) => "closed set",
            Value::Lc(_) => "locally closed set",
            Value::Sheaf(_) => "sheaf",
            Value::Ind(_) => "ind-object",
            Value::Map(_) => "map",
            Value::Morphism(_) => "morphism",
            Value::Presheaf(_) => "presheaf",
            Value::Answer { .. } => "answer",
        }
    }
}

/// One emitted statement.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub index: usize,
    pub input: String,
    pub result: String,
    pub ok: bool,
    pub elapsed_ms: Option<u128>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub header: String,
    pub records: Vec<Record>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.ok).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header)?;
        for r in &self.records {
            write!(f, "[{}] {}", r.index, r.input)?;
            if let Some(ms) = r.elapsed_ms {
                write!(f, " ({ms} ms)")?;
            }
            writeln!(f)?;
            for line in r.result.lines() {
                writeln!(f, "  {line}")?;
            }
        }
        write!(
            f,
            "summary {} records {} failed",
            self.records.len(),
            self.failures()
        )
    }
}

pub fn header(config: &Config) -> String {
    format!(
        "# indsheaf report v1\n# field {} trunc {} seed {}",
        config.field, config.trunc, config.seed
    )
}

/// Runs every statement in order. A runtime error stops the run and
/// carries the statement index.
pub fn run(script: &Script, config: &Config) -> Result<Report> {
    let mut interp = Interp {
        config: config.clone(),
        env: HashMap::new(),
    };
    let mut records = Vec::new();
    for (i, stmt) in script.stmts.iter().enumerate() {
        let index = i + 1;
        let wrap = |e: CliError| CliError::Runtime {
            stmt: index,
            msg: e.to_string(),
        };
        match stmt {
            Stmt::Let { name, expr, .. } => {
                let v = interp.eval(expr, &HashMap::new()).map_err(wrap)?;
                interp.env.insert(name.clone(), v);
            }
            Stmt::Emit { expr, text } => {
                let start = Instant::now();
                let v = interp.eval(expr, &HashMap::new()).map_err(wrap)?;
                let (result, ok) = match v {
                    Value::Answer { text, ok } => (text, ok),
                    other => (describe(&other), true),
                };
                let elapsed_ms = config.timings.then(|| start.elapsed().as_millis());
                records.push(Record {
                    index,
                    input: text.clone(),
                    result,
                    ok,
                    elapsed_ms,
                });
            }
        }
    }
    Ok(Report {
        header: header(config),
        records,
    })
}

fn describe_sheaf(f: &Sheaf) -> String {
    let (lo, hi) = f.window();
    let dims: Vec<String> = (lo..=hi).map(|c| f.dim(c).to_string()).collect();
    let (l, r) = f.tails();
    match f.space() {
        Space::Line => format!(
            "sheaf on line: cells {lo}..{hi} dims [{}] tails {l} {r}",
            dims.join(" ")
        ),
        Space::Poset(_) => format!("sheaf on {}: dims [{}]", f.space(), dims.join(" ")),
    }
}

fn describe(v: &Value) -> String {
    match v {
        Value::Int(n) => n.to_string(),
        Value::Str(s) => format!("\"{s}\""),
        Value::List(items) => format!(
            "[{}]",
            items.iter().map(describe).collect::<Vec<_>>().join(", ")
        ),
        Value::Space(s) => s.to_string(),
        Value::Open(u) => format!("open {u}"),
        Value::Closed(s) => format!("closed {s}"),
        Value::Lc(z) => format!("locally closed {z}"),
        Value::Sheaf(f) => describe_sheaf(f),
        Value::Ind(x) => {
            let c = x.cert();
            let dims: Vec<String> = (0..=c.n0 + c.p)
                .map(|n| format!("{}", total_dim(&x.level(n))))
                .collect();
            format!("ind-object cert({}) level sizes [{}]", c, dims.join(" "))
        }
        Value::Map(m) => format!("map {} -> {}", m.source(), m.target()),
        Value::Morphism(m) => format!("morphism offset {} cert({})", m.offset(), m.cert()),
        Value::Presheaf(p) => format!("presheaf on {}", p.space()),
        Value::Answer { text, .. } => text.clone(),
    }
}

/// Sum of the stalk dimensions over the window, tails excluded.
fn total_dim(f: &Sheaf) -> usize {
    let (lo, hi) = f.window();
    (lo..=hi).map(|c| f.dim(c)).sum()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verdict_text(what: &str, v: Verdict) -> String {
    format!("{what} = {} [{}]", yes(v.holds), v.tag)
}

fn dim_text(dim: Dim, tag: Tag, cert: Option<&PeriodCert>) -> String {
    match (dim, cert) {
        (Dim::Infinite, Some(c)) => format!("dim = inf [{tag}] cert({c})"),
        _ => format!("dim = {dim} [{tag}]"),
    }
}

struct Interp {
    config: Config,
    env: HashMap<String, Value>,
}

type Locals = HashMap<String, Value>;

fn type_error(name: &str, i: usize, want: &str, got: &Value) -> CliError {
    CliError::Config(format!(
        "`{name}` argument {} must be a {want}, got a {}",
        i + 1,
        got.kind()
    ))
}

/// Coordinate inclusion or projection between stalks of dims `a` and `b`.
fn coordinate_map(field: Field, a: usize, b: usize) -> LinearMap {
    let mut m = LinearMap::zero(field, a, b);
    for i in 0..a.min(b) {
        m.set(i, i, field.one());
    }
    m
}

fn canonical(a: &Sheaf, b: &Sheaf) -> Result<SheafMorphism> {
    Ok(SheafMorphism::from_fn(a, b, |c| {
        coordinate_map(a.field(), a.dim(c), b.dim(c))
    })?)
}

/// Onsets and periods searched for `indcolim` certificates.
const MAX_ONSET: usize = 6;
const MAX_PERIOD: usize = 2;
/// Levels past the certified range compared against the body.
const EXTRA_CHECKS: usize = 3;

fn candidate_rules(x: &dyn Fn(usize) -> Result<Sheaf>, n0: usize, p: usize) -> Result<Vec<Rule>> {
    let a = x(n0)?;
    let b = x(n0 + p)?;
    let mut out = vec![Rule::Translate(0)];
    if a.space().is_line() {
        out.extend((1..=3).flat_map(|s| [Rule::Translate(s), Rule::Translate(-s)]));
        let ((lo, hi), (lo2, hi2)) = (a.window(), b.window());
        let (dl, dr) = (lo - lo2, hi2 - hi);
        if dl >= 0 && dr >= 0 && dl % 2 == 0 && dr % 2 == 0 && dl + dr > 0 {
            let (l, r) = (dl / 2, dr / 2);
            let (va, vb) = (lo.div_euclid(2) + 1, hi.div_euclid(2) - 1);
            for (ca, cb) in [(va, vb), (0, 0), (va - 1, vb + 1), (va + 1, vb - 1)] {
                if ca <= cb {
                    out.push(Rule::Stretch { a: ca, b: cb, l, r });
                }
            }
        }
    }
    if p == 1 {
        let t = canonical(&a, &b)?;
        if t.is_mono() {
            let d = t.cokernel()?.object;
            if !d.is_zero() {
                out.push(Rule::Grow(d));
            }
        }
    }
    Ok(out)
}

/// The system `X_0 -> X_1 -> ...` with canonical coordinate transitions
/// under the first certificate that validates and also predicts a few
/// further levels of the body.
fn discover(level: &dyn Fn(usize) -> Result<Sheaf>) -> Result<SeqSystem> {
    let sheaf_level = |n: usize| level(n).map_err(|e| indsheaf::Error::Unsupported(e.to_string()));
    let transition = |n: usize| -> indsheaf::Result<SheafMorphism> {
        canonical(&sheaf_level(n)?, &sheaf_level(n + 1)?).map_err(|e| match e {
            CliError::Core(c) => c,
            other => indsheaf::Error::Unsupported(other.to_string()),
        })
    };
    for n0 in 0..=MAX_ONSET {
        for p in 1..=MAX_PERIOD {
            for rule in candidate_rules(level, n0, p)? {
                let Ok(cert) = PeriodCert::new(n0, p, rule) else {
                    continue;
                };
                let Ok(sys) = SeqSystem::generate(cert, sheaf_level, transition) else {
                    continue;
                };
                let e = sys.explicit_levels().len();
                let predicted = (e..e + EXTRA_CHECKS * p).all(|n| {
                    level(n).is_ok_and(|f| f.same_as(&sys.level(n)))
                        && transition(n).is_ok_and(|t| t.same_as(&sys.transition(n)))
                });
                if predicted {
                    return Ok(sys);
                }
            }
        }
    }
    Err(CliError::Config(
        "indcolim: no period certificate found for the body".into(),
    ))
}

impl Interp {
    fn field(&self) -> Field {
        self.config.field
    }

    fn eval(&self, e: &Expr, locals: &Locals) -> Result<Value> {
        match e {
            Expr::Int(n, _) => Ok(Value::Int(*n)),
            Expr::Str(s, _) => Ok(Value::Str(s.clone())),
            Expr::List(items, _) => Ok(Value::List(
                items
                    .iter()
                    .map(|x| self.eval(x, locals))
                    .collect::<Result<_>>()?,
            )),
            Expr::Var(name, _) => locals
                .get(name)
                .or_else(|| self.env.get(name))
                .cloned()
                .ok_or_else(|| CliError::Config(format!("`{name}` is not bound"))),
            Expr::IndColim { var, body, .. } => {
                let level = |n: usize| -> Result<Sheaf> {
                    let mut inner = locals.clone();
                    inner.insert(var.clone(), Value::Int(n as i64));
                    match self.eval(body, &inner)? {
                        Value::Sheaf(f) => Ok(f),
                        other => Err(CliError::Config(format!(
                            "indcolim body must be a sheaf, got a {}",
                            other.kind()
                        ))),
                    }
                };
                Ok(Value::Ind(discover(&level)?))
            }
            Expr::Call { name, args, .. } => {
                let vals = args
                    .iter()
                    .map(|a| self.eval(a, locals))
                    .collect::<Result<Vec<_>>>()?;
                self.call(name, &vals)
            }
        }
    }

    fn call(&self, name: &str, a: &[Value]) -> Result<Value> {
        let field = self.field();
        let trunc = self.config.trunc;
        let int = |i: usize| match &a[i] {
            Value::Int(n) => Ok(*n),
            v => Err(type_error(name, i, "integer", v)),
        };
        let string = |i: usize| match &a[i] {
            Value::Str(s) => Ok(s.clone()),
            v => Err(type_error(name, i, "string", v)),
        };
        let space = |i: usize| match &a[i] {
            Value::Space(s) => Ok(s.clone()),
            v => Err(type_error(name, i, "space", v)),
        };
        let ints = |i: usize| match &a[i] {
            Value::List(items) => items
                .iter()
                .map(|v| match v {
                    Value::Int(n) => Ok(*n),
                    v => Err(type_error(name, i, "list of integers", v)),
                })
                .collect::<Result<Vec<i64>>>(),
            v => Err(type_error(name, i, "list", v)),
        };
        let open = |i: usize| match &a[i] {
            Value::Open(u) => Ok(u.clone()),
            v => Err(type_error(name, i, "open set", v)),
        };
        let sheaf = |i: usize| match &a[i] {
            Value::Sheaf(f) => Ok(f.clone()),
            v => Err(type_error(name, i, "sheaf", v)),
        };
        // sheaves are promoted to ind-objects through iota
        let ind = |i: usize| match &a[i] {
            Value::Ind(x) => Ok(x.clone()),
            Value::Sheaf(f) => Ok(iota(f)?),
            v => Err(type_error(name, i, "ind-object", v)),
        };
        let map = |i: usize| match &a[i] {
            Value::Map(m) => Ok(m.clone()),
            v => Err(type_error(name, i, "map", v)),
        };
        let morphism = |i: usize| match &a[i] {
            Value::Morphism(m) => Ok(m.clone()),
            v => Err(type_error(name, i, "morphism", v)),
        };
        let presheaf = |i: usize| match &a[i] {
            Value::Presheaf(p) => Ok(p.clone()),
            v => Err(type_error(name, i, "presheaf", v)),
        };
        let answer = |text: String, ok: bool| Ok(Value::Answer { text, ok });
        Ok(match name {
            "line" => Value::Space(Space::Line),
            "point" => Value::Space(Space::point()),
            "chain" => Value::Space(Space::poset(FinitePoset::chain(
                usize::try_from(int(0)?)
                    .map_err(|_| CliError::Config("chain length must be nonnegative".into()))?,
            ))),
            "poset" => {
                let n = usize::try_from(int(0)?)
                    .map_err(|_| CliError::Config("poset size must be nonnegative".into()))?;
                let Value::List(pairs) = &a[1] else {
                    return Err(type_error(name, 1, "list of pairs", &a[1]));
                };
                let covers = pairs
                    .iter()
                    .map(|p| match p {
                        Value::List(ab) if ab.len() == 2 => match (&ab[0], &ab[1]) {
                            (Value::Int(x), Value::Int(y)) if *x >= 0 && *y >= 0 => {
                                Ok((*x as usize, *y as usize))
                            }
                            _ => Err(type_error(name, 1, "list of pairs", p)),
                        },
                        _ => Err(type_error(name, 1, "list of pairs", p)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Value::Space(Space::poset(FinitePoset::new(n, &covers)?))
            }
            "interval" => Value::Open(OpenSet::interval(int(0)?, int(1)?)),
            "right_ray" => Value::Open(OpenSet::right_ray(int(0)?)),
            "left_ray" => Value::Open(OpenSet::left_ray(int(0)?)),
            "closed_ray" => Value::Lc(LocallyClosedSet::closed_right_ray(int(0)?)),
            "closed_interval" => Value::Lc(LocallyClosedSet::closed_interval(int(0)?, int(1)?)),
            "star" => Value::Open(space(0)?.star(int(1)?)),
            "open" => Value::Open(OpenSet::new(CellSet::from_cells(&space(0)?, ints(1)?)?)?),
            "closed" => {
                let s = CellSet::from_cells(&space(0)?, ints(1)?)?;
                if !s.is_closed() {
                    return Err(CliError::Config(format!("{s} is not closed")));
                }
                Value::Closed(s)
            }
            "cell" => Value::Lc(LocallyClosedSet::cell(&space(0)?, int(1)?)),
            "whole" => Value::Open(OpenSet::whole(&space(0)?)),
            "empty" => Value::Open(OpenSet::empty(&space(0)?)),
            "k" => {
                let d = if a.len() > 1 { int(1)? } else { 1 };
                let d = usize::try_from(d)
                    .map_err(|_| CliError::Config("rank must be nonnegative".into()))?;
                Value::Sheaf(Sheaf::constant(&space(0)?, field, d))
            }
            "k_on" => Value::Sheaf(match &a[0] {
                Value::Open(u) => Sheaf::constant_on_open(u, field),
                Value::Closed(s) => {
                    Sheaf::constant_on(&LocallyClosedSet::from_closed(s.clone())?, field, 1)
                }
                Value::Lc(z) => Sheaf::constant_on(z, field, 1),
                v => return Err(type_error(name, 0, "set", v)),
            }),
            "zero" => Value::Sheaf(Sheaf::zero(&space(0)?, field)),
            "sum" => match (&a[0], &a[1]) {
                (Value::Sheaf(f), Value::Sheaf(g)) => Value::Sheaf(f.direct_sum(g)?),
                _ => return Err(type_error(name, 0, "pair of sheaves", &a[0])),
            },
            "shift" => Value::Sheaf(sheaf(0)?.shift(int(1)?)?),
            "restrict_open" => Value::Sheaf(sheaf(0)?.restrict_open(&open(1)?)?),
            "hom_sheaf" => Value::Sheaf(sheaf(0)?.hom_sheaf(&sheaf(1)?)?),
            "ind" => Value::Ind(SeqSystem::constant(&sheaf(0)?)),
            "iota" => Value::Ind(iota(&sheaf(0)?)?),
            "alpha" => Value::Sheaf(alpha(&ind(0)?)?),
            "beta" => Value::Ind(beta(&sheaf(0)?)?),
            "ktilde" => Value::Ind(match &a[0] {
                Value::Open(u) => beta_open(u, field)?,
                Value::Closed(s) => beta_closed(s, s.space(), field)?,
                v => return Err(type_error(name, 0, "open or closed set", v)),
            }),
            "rays" => Value::Ind(receding_rays(field)?),
            "growth" => Value::Ind(free_growth(field)?),
            "tensor" => match (&a[0], &a[1]) {
                (Value::Sheaf(f), Value::Sheaf(g)) => Value::Sheaf(f.tensor(g)?),
                _ => Value::Ind(tensor_ind(&ind(0)?, &ind(1)?)?),
            },
            "ihom" => match (&a[0], &a[1]) {
                (Value::Sheaf(f), Value::Sheaf(g)) => Value::Sheaf(f.hom_sheaf(g)?),
                _ => Value::Ind(ihom_ind(&ind(0)?, &ind(1)?)?),
            },
            "restrict" => Value::Ind(restrict(&ind(0)?, &open(1)?)?),
            "pullback" => match &a[1] {
                Value::Sheaf(g) => Value::Sheaf(inverse_image(&map(0)?, g)?),
                _ => Value::Ind(inverse_image_ind(&map(0)?, &ind(1)?)?),
            },
            "push" => match &a[1] {
                Value::Sheaf(f) => Value::Sheaf(direct_image(&map(0)?, f)?),
                _ => Value::Ind(direct_image_ind(&map(0)?, &ind(1)?)?),
            },
            "push_proper" => match &a[1] {
                Value::Sheaf(f) => Value::Sheaf(proper_direct_image(&map(0)?, f)?),
                _ => Value::Ind(proper_direct_image_ind(&map(0)?, &ind(1)?)?),
            },
            "identity" => Value::Map(CellMap::identity(&space(0)?)),
            "const_map" => Value::Map(CellMap::constant(&space(0)?, &space(1)?, int(2)?)?),
            "table_map" => Value::Map(CellMap::new(
                space(0)?,
                space(1)?,
                MapKind::Table(ints(2)?),
            )?),
            "shift_map" => Value::Map(CellMap::new(
                Space::Line,
                Space::Line,
                MapKind::LineShift(int(0)?),
            )?),
            "counit" => Value::Morphism(match &a[0] {
                Value::Open(u) => beta_open_counit(u, field)?,
                Value::Closed(s) => beta_closed_counit(s, s.space(), field)?,
                v => return Err(type_error(name, 0, "open or closed set", v)),
            }),
            "kernel" => Value::Ind(kernel(&morphism(0)?)?.object),
            "kernel_map" => Value::Morphism(kernel(&morphism(0)?)?.inclusion),
            "cokernel" => Value::Ind(cokernel(&morphism(0)?)?.object),
            "cokernel_map" => Value::Morphism(cokernel(&morphism(0)?)?.projection),
            "comparison" => Value::Morphism(match &a[0] {
                Value::Map(f) => proper_comparison(f, &sheaf(1)?)?,
                Value::Open(u) => open_embedding_comparison(u, &sheaf(1)?)?,
                v => return Err(type_error(name, 0, "map or open set", v)),
            }),
            "cell_functions" => Value::Presheaf(PresheafOnT::cell_functions(&space(0)?, field)),
            "sections" => Value::Presheaf(PresheafOnT::sections(&sheaf(0)?)),
            "constant_presheaf" => {
                Value::Presheaf(PresheafOnT::constant_on_nonempty(&space(0)?, field))
            }
            "rho" => Value::Presheaf(PresheafOnT::rho(&ind(0)?)),
            "dim_hom" => {
                let text = match (&a[0], &a[1]) {
                    (Value::Sheaf(f), Value::Sheaf(g)) => {
                        dim_text(Dim::Finite(f.hom_space(g)?.dim()), Tag::Exact, None)
                    }
                    (Value::Sheaf(f), _) => {
                        let y = ind(1)?;
                        let c = hom_from_sheaf_with(f, &y, 0, trunc)?;
                        dim_text(c.dim(), c.tag(), Some(y.cert()))
                    }
                    _ => {
                        let (x, y) = (ind(0)?, ind(1)?);
                        let h = hom_ind_with(&x, &y, trunc)?;
                        dim_text(h.dim(), h.tag(), Some(y.cert()))
                    }
                };
                return answer(text, true);
            }
            "is_zero" => {
                return answer(
                    verdict_text("zero", is_ind_zero_with(&ind(0)?, trunc)?),
                    true,
                )
            }
            "is_mono" => {
                return answer(
                    verdict_text(
                        "mono",
                        is_ind_zero_with(&kernel(&morphism(0)?)?.object, trunc)?,
                    ),
                    true,
                )
            }
            "is_epi" => {
                return answer(
                    verdict_text(
                        "epi",
                        is_ind_zero_with(&cokernel(&morphism(0)?)?.object, trunc)?,
                    ),
                    true,
                )
            }
            "is_iso" => return answer(verdict_text("iso", is_iso(&morphism(0)?)?), true),
            "is_exact" => {
                let e = is_exact(&morphism(0)?, &morphism(1)?)?;
                let text = format!(
                    "exact = {} (homology {} [{}], lifting {} [{}])",
                    yes(e.homology.holds && e.lifting.holds),
                    yes(e.homology.holds),
                    e.homology.tag,
                    yes(e.lifting.holds),
                    e.lifting.tag
                );
                return answer(text, true);
            }
            "representable" => {
                return answer(
                    format!("representable = {}", yes(ind(0)?.is_representable())),
                    true,
                )
            }
            "check_adjunction" => return self.adjunction(a),
            "check_mv" => {
                let Value::List(pairs) = &a[1] else {
                    return Err(type_error(name, 1, "list of pairs", &a[1]));
                };
                let pairs = pairs
                    .iter()
                    .map(|p| match p {
                        Value::List(uv) if uv.len() == 2 => match (&uv[0], &uv[1]) {
                            (Value::Open(u), Value::Open(v)) => Ok((u.clone(), v.clone())),
                            _ => Err(type_error(name, 1, "list of open pairs", p)),
                        },
                        _ => Err(type_error(name, 1, "list of open pairs", p)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let report = check_mv(&presheaf(0)?, &pairs)?;
                return answer(report.to_string(), report.passed());
            }
            "evaluate" => {
                let e = extend(&presheaf(0)?).evaluate(&sheaf(1)?)?;
                return answer(dim_text(Dim::Finite(e.dim()), e.tag, None), true);
            }
            "projection_formula" => {
                let r = projection_formula_check(&map(0)?, &ind(1)?, &ind(2)?)?;
                return answer(r.to_string(), r.passed());
            }
            "base_change" => {
                let sq = CartesianSquare::fiber_product(&map(0)?, &map(1)?)?;
                let r = base_change_check(&sq, &ind(2)?)?;
                return answer(r.to_string(), r.passed());
            }
            "glueing" => {
                let Value::List(cover) = &a[2] else {
                    return Err(type_error(name, 2, "list of open sets", &a[2]));
                };
                let cover = cover
                    .iter()
                    .map(|u| match u {
                        Value::Open(u) => Ok(u.clone()),
                        v => Err(type_error(name, 2, "list of open sets", v)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let g = hom_presheaf(&ind(0)?, &ind(1)?).check_glueing(&cover)?;
                return answer(g.to_string(), g.verdict.holds);
            }
            "run_suite" => {
                let seed = if a.len() > 1 {
                    int(1)? as u64
                } else {
                    self.config.seed
                };
                let cfg = suites::SuiteConfig { field, seed, trunc };
                let r = suites::run_suite(&string(0)?, &cfg)?;
                return answer(r.to_string(), r.passed());
            }
            "save" => {
                let obj = match &a[0] {
                    Value::Space(s) => Object::Space(s.clone()),
                    Value::Sheaf(f) => Object::Sheaf(f.clone()),
                    Value::Ind(x) => Object::System(x.clone()),
                    v => return Err(type_error(name, 0, "space, sheaf or ind-object", v)),
                };
                let path = string(1)?;
                std::fs::write(&path, format::save(&obj))
                    .map_err(|e| CliError::Io(format!("{path}: {e}")))?;
                return answer(format!("saved {path}"), true);
            }
            "load" => {
                let path = string(0)?;
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Io(format!("{path}: {e}")))?;
                match format::load(&text)? {
                    Object::Space(s) => Value::Space(s),
                    Object::Sheaf(f) => Value::Sheaf(f),
                    Object::System(x) => Value::Ind(x),
                    Object::Morphism(_) => {
                        return Err(CliError::Format("sheaf morphisms cannot be bound".into()))
                    }
                    Object::Dim(d) => Value::Answer {
                        text: dim_text(d.dim, d.tag, None),
                        ok: true,
                    },
                }
            }
            "show" => return answer(describe(&a[0]), true),
            other => return Err(CliError::Config(format!("`{other}` is not implemented"))),
        })
    }

    fn adjunction(&self, a: &[Value]) -> Result<Value> {
        let trunc = self.config.trunc;
        let Value::Str(which) = &a[0] else {
            return Err(type_error("check_adjunction", 0, "string", &a[0]));
        };
        let lift = |v: &Value, i: usize| match v {
            Value::Ind(x) => Ok(x.clone()),
            Value::Sheaf(f) => Ok(iota(f)?),
            v => Err(type_error("check_adjunction", i, "ind-object", v)),
        };
        let sheaf = |v: &Value, i: usize| match v {
            Value::Sheaf(f) => Ok(f.clone()),
            v => Err(type_error("check_adjunction", i, "sheaf", v)),
        };
        let need = |n: usize| {
            if a.len() == n {
                Ok(())
            } else {
                Err(CliError::Config(format!(
                    "adjunction `{which}` takes {} objects",
                    n - 1
                )))
            }
        };
        let hom = |x: &SeqSystem, y: &SeqSystem| -> Result<DimRecord> {
            let h = hom_ind_with(x, y, trunc)?;
            Ok(DimRecord {
                dim: h.dim(),
                tag: h.tag(),
            })
        };
        let from_sheaf = |f: &Sheaf, y: &SeqSystem| -> Result<DimRecord> {
            let c = hom_from_sheaf_with(f, y, 0, trunc)?;
            Ok(DimRecord {
                dim: c.dim(),
                tag: c.tag(),
            })
        };
        let (lhs, rhs) = match which.as_str() {
            "beta_alpha" => {
                need(3)?;
                let (f, x) = (sheaf(&a[1], 1)?, lift(&a[2], 2)?);
                let ax = alpha(&x)?;
                (
                    hom(&beta(&f)?, &x)?,
                    DimRecord {
                        dim: Dim::Finite(f.hom_space(&ax)?.dim()),
                        tag: Tag::Exact,
                    },
                )
            }
            "alpha_iota" => {
                need(3)?;
                let (x, g) = (lift(&a[1], 1)?, sheaf(&a[2], 2)?);
                let ax = alpha(&x)?;
                (
                    DimRecord {
                        dim: Dim::Finite(ax.hom_space(&g)?.dim()),
                        tag: Tag::Exact,
                    },
                    hom(&x, &iota(&g)?)?,
                )
            }
            "tensor_ihom" => {
                need(4)?;
                let (x, y, z) = (lift(&a[1], 1)?, lift(&a[2], 2)?, lift(&a[3], 3)?);
                (hom(&tensor_ind(&x, &y)?, &z)?, hom(&y, &ihom_ind(&x, &z)?)?)
            }
            "pullback_push" => {
                need(4)?;
                let Value::Map(f) = &a[1] else {
                    return Err(type_error("check_adjunction", 1, "map", &a[1]));
                };
                let (g, x) = (lift(&a[2], 2)?, lift(&a[3], 3)?);
                let pulled = inverse_image_ind(f, &g)?;
                let pushed = direct_image_ind(f, &x)?;
                let lhs = match g.cert().rule.is_stationary() {
                    true => from_sheaf(&alpha(&pulled)?, &x)?,
                    false => hom(&pulled, &x)?,
                };
                (lhs, hom(&g, &pushed)?)
            }
            other => return Err(CliError::Config(format!("unknown adjunction `{other}`"))),
        };
        let ok = lhs.dim == rhs.dim;
        let tag = lhs.tag.meet(rhs.tag);
        let text = format!(
            "lhs {} rhs {} {} [{tag}]",
            lhs.dim,
            rhs.dim,
            if ok { "pass" } else { "fail" }
        );
        Ok(Value::Answer { text, ok })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn eval(text: &str) -> Result<Value> {
        let script = parse(text)?;
        let interp = Interp {
            config: Config::default(),
            env: HashMap::new(),
        };
        let Stmt::Emit { expr, .. } = &script.stmts[0] else {
            panic!("expected an expression")
        };
        interp.eval(expr, &HashMap::new())
    }

    fn system(text: &str) -> SeqSystem {
        match eval(text).unwrap() {
            Value::Ind(x) => x,
            other => panic!("expected an ind-object, got {}", other.kind()),
        }
    }

    #[test]
    fn coordinate_maps_include_or_project() {
        let q = Field::Rationals;
        let up = coordinate_map(q, 1, 2);
        assert_eq!((up.domain_dim(), up.codomain_dim(), up.rank()), (1, 2, 1));
        assert!(coordinate_map(q, 2, 2).is_identity());
        assert_eq!(coordinate_map(q, 2, 0).rank(), 0);
    }

    #[test]
    fn constant_bodies_are_stationary() {
        let x = system("indcolim n: k(chain(3));");
        assert!(x.cert().rule.is_stationary());
        assert!(x.is_representable());
    }

    #[test]
    fn shifted_rays_translate() {
        let x = system("indcolim n: k_on(closed_ray(n));");
        assert!(matches!(x.cert().rule, Rule::Translate(_)));
        assert!(!x.is_representable());
    }

    #[test]
    fn growing_ranks_grow() {
        let x = system("indcolim n: k(point(), n);");
        assert!(matches!(x.cert().rule, Rule::Grow(_)));
        for n in 0..6 {
            assert_eq!(x.level(n).dim(0), n);
        }
    }

    #[test]
    fn bodies_without_a_period_are_refused() {
        assert!(eval("indcolim n: k(chain(n));").is_err());
        assert!(eval("indcolim n: interval(0, n);").is_err());
    }

    #[test]
    fn type_errors_name_the_argument() {
        let err = eval("k(1);").unwrap_err().to_string();
        assert!(err.contains("`k` argument 1 must be a space"), "{err}");
    }

    #[test]
    fn dimension_text() {
        assert_eq!(
            dim_text(Dim::Finite(2), Tag::Exact, None),
            "dim = 2 [exact]"
        );
        let c = PeriodCert::stationary(0);
        assert_eq!(
            dim_text(Dim::Infinite, Tag::Certified, Some(&c)),
            format!("dim = inf [certified] cert({c})")
        );
    }
}
