//! Text format for spaces, sheaves, morphisms, certified systems and
//! dimension records: a version header line followed by one S-expression.
//! Loading rebuilds every object through its checked constructor, so sheaf
//! axioms and period certificates are validated again.

use std::collections::BTreeMap;

use indsheaf::indcat::{Dim, PeriodCert, Rule, SeqSystem, Tag};
use indsheaf::linalg::{Field, LinearMap, Scalar};
use indsheaf::sheaf::{Sheaf, SheafMorphism};
use indsheaf::space::{FinitePoset, Space};
use lexpr::Value as Sx;

use crate::error::{CliError, Result};

pub const HEADER: &str = "indsheaf v1";

/// A dimension answer with the strength of its justification.
#[derive(Clone, Debug, PartialEq)]
pub struct DimRecord {
    pub dim: Dim,
    pub tag: Tag,
}

impl DimRecord {
    /// The record as an exact claim; refused unless the answer is exact or
    /// certified.
    pub fn as_exact(&self) -> Result<DimRecord> {
        match self.tag {
            Tag::Truncated(n) => Err(CliError::Format(format!(
                "a value truncated at {n} is not exact"
            ))),
            _ => Ok(self.clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Object {
    Space(Space),
    Sheaf(Sheaf),
    Morphism(SheafMorphism),
    System(SeqSystem),
    Dim(DimRecord),
}

impl PartialEq for Object {
    fn eq(&self, other: &Object) -> bool {
        match (self, other) {
            (Object::Space(a), Object::Space(b)) => a == b,
            (Object::Sheaf(a), Object::Sheaf(b)) => a.same_as(b),
            (Object::Morphism(a), Object::Morphism(b)) => a.same_as(b),
            (Object::System(a), Object::System(b)) => same_system(a, b),
            (Object::Dim(a), Object::Dim(b)) => a == b,
            _ => false,
        }
    }
}

/// Equal certificates, explicit levels and explicit transitions.
pub fn same_system(a: &SeqSystem, b: &SeqSystem) -> bool {
    let cert = |x: &SeqSystem| (x.cert().n0, x.cert().p);
    let rules = match (&a.cert().rule, &b.cert().rule) {
        (Rule::Grow(d), Rule::Grow(e)) => d.same_as(e),
        (r, s) => r == s,
    };
    cert(a) == cert(b)
        && rules
        && a.explicit_levels().len() == b.explicit_levels().len()
        && a.explicit_levels()
            .iter()
            .zip(b.explicit_levels())
            .all(|(x, y)| x.same_as(y))
        && a.explicit_transitions()
            .iter()
            .zip(b.explicit_transitions())
            .all(|(x, y)| x.same_as(y))
}

fn sym(s: &str) -> Sx {
    Sx::symbol(s)
}

fn int(n: i64) -> Sx {
    Sx::from(n)
}

fn list(items: Vec<Sx>) -> Sx {
    Sx::list(items)
}

fn tagged(head: &str, mut rest: Vec<Sx>) -> Sx {
    rest.insert(0, sym(head));
    list(rest)
}

fn space_sx(s: &Space) -> Sx {
    match s {
        Space::Line => tagged("space", vec![sym("line")]),
        Space::Poset(p) => {
            let covers = p
                .covers()
                .iter()
                .map(|&(a, b)| list(vec![int(a as i64), int(b as i64)]))
                .collect();
            tagged(
                "space",
                vec![sym("poset"), int(p.size() as i64), list(covers)],
            )
        }
    }
}

fn matrix_sx(m: &LinearMap) -> Sx {
    let mut items = vec![int(m.codomain_dim() as i64), int(m.domain_dim() as i64)];
    items.extend(m.entries().iter().map(|x| Sx::string(x.to_string())));
    tagged("matrix", items)
}

fn sheaf_sx(f: &Sheaf) -> Sx {
    let (lo, hi) = f.window();
    let (l, r) = f.tails();
    let stalks = (lo..=hi).map(|c| int(f.dim(c) as i64)).collect();
    let maps = f
        .stored_maps()
        .iter()
        .map(|(&(c, d), m)| list(vec![int(c), int(d), matrix_sx(m)]))
        .collect();
    tagged(
        "sheaf",
        vec![
            space_sx(f.space()),
            tagged("field", vec![Sx::string(f.field().to_string())]),
            tagged("window", vec![int(lo), int(hi)]),
            tagged("tails", vec![int(l as i64), int(r as i64)]),
            tagged("stalks", stalks),
            tagged("maps", maps),
        ],
    )
}

fn morphism_sx(m: &SheafMorphism) -> Sx {
    let (lo, hi) = m.window();
    let (l, r) = m.tail_components();
    tagged(
        "morphism",
        vec![
            tagged("source", vec![sheaf_sx(m.source())]),
            tagged("target", vec![sheaf_sx(m.target())]),
            tagged("window", vec![int(lo), int(hi)]),
            tagged(
                "components",
                (lo..=hi).map(|c| matrix_sx(&m.component(c))).collect(),
            ),
            tagged("tails", vec![matrix_sx(l), matrix_sx(r)]),
        ],
    )
}

fn rule_sx(r: &Rule) -> Sx {
    match r {
        Rule::Translate(s) => tagged("translate", vec![int(*s)]),
        Rule::Stretch { a, b, l, r } => tagged("stretch", vec![int(*a), int(*b), int(*l), int(*r)]),
        Rule::Grow(d) => tagged("grow", vec![sheaf_sx(d)]),
    }
}

fn system_sx(x: &SeqSystem) -> Sx {
    let c = x.cert();
    tagged(
        "system",
        vec![
            tagged(
                "cert",
                vec![int(c.n0 as i64), int(c.p as i64), rule_sx(&c.rule)],
            ),
            tagged("levels", x.explicit_levels().iter().map(sheaf_sx).collect()),
            tagged(
                "transitions",
                x.explicit_transitions().iter().map(morphism_sx).collect(),
            ),
        ],
    )
}

fn dim_sx(d: &DimRecord) -> Sx {
    let dim = match d.dim {
        Dim::Finite(n) => int(n as i64),
        Dim::Infinite => sym("inf"),
    };
    let tag = match d.tag {
        Tag::Exact => list(vec![sym("exact")]),
        Tag::Certified => list(vec![sym("certified")]),
        Tag::Truncated(n) => list(vec![sym("truncated"), int(n as i64)]),
    };
    tagged("dim", vec![dim, tag])
}

/// The object as text, header included.
pub fn save(obj: &Object) -> String {
    let body = match obj {
        Object::Space(s) => space_sx(s),
        Object::Sheaf(f) => sheaf_sx(f),
        Object::Morphism(m) => morphism_sx(m),
        Object::System(x) => system_sx(x),
        Object::Dim(d) => dim_sx(d),
    };
    format!("{HEADER}\n{body}\n")
}

fn bad(what: &str) -> CliError {
    CliError::Format(format!("malformed {what}"))
}

fn items<'a>(v: &'a Sx, head: &str) -> Result<Vec<&'a Sx>> {
    let all: Vec<&Sx> = v.list_iter().ok_or_else(|| bad(head))?.collect();
    match all.first().and_then(|h| h.as_symbol()) {
        Some(h) if h == head => Ok(all[1..].to_vec()),
        _ => Err(bad(head)),
    }
}

fn get_int(v: &Sx) -> Result<i64> {
    v.as_i64().ok_or_else(|| bad("integer"))
}

fn get_usize(v: &Sx) -> Result<usize> {
    usize::try_from(get_int(v)?).map_err(|_| bad("count"))
}

fn pair(v: &Sx, head: &str) -> Result<(i64, i64)> {
    match items(v, head)?.as_slice() {
        [a, b] => Ok((get_int(a)?, get_int(b)?)),
        _ => Err(bad(head)),
    }
}

pub fn parse_field(text: &str) -> Result<Field> {
    match text {
        "q" => Ok(Field::Rationals),
        _ => {
            let p = text
                .strip_prefix("fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| CliError::Config(format!("unknown field `{text}`")))?;
            Ok(Field::prime(p)?)
        }
    }
}

fn read_space(v: &Sx) -> Result<Space> {
    let it = items(v, "space")?;
    match it.first().and_then(|s| s.as_symbol()) {
        Some("line") => Ok(Space::Line),
        Some("poset") if it.len() == 3 => {
            let n = get_usize(it[1])?;
            let covers = it[2]
                .list_iter()
                .ok_or_else(|| bad("covers"))?
                .map(|c| {
                    let ab: Vec<&Sx> = c.list_iter().ok_or_else(|| bad("cover"))?.collect();
                    match ab.as_slice() {
                        [a, b] => Ok((get_usize(a)?, get_usize(b)?)),
                        _ => Err(bad("cover")),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Space::poset(FinitePoset::new(n, &covers)?))
        }
        _ => Err(bad("space")),
    }
}

fn read_matrix(v: &Sx, field: Field) -> Result<LinearMap> {
    let it = items(v, "matrix")?;
    if it.len() < 2 {
        return Err(bad("matrix"));
    }
    let (rows, cols) = (get_usize(it[0])?, get_usize(it[1])?);
    if it.len() != 2 + rows * cols {
        return Err(bad("matrix"));
    }
    let entries = it[2..]
        .iter()
        .map(|e| {
            Ok(Scalar::parse(
                field,
                e.as_str().ok_or_else(|| bad("scalar"))?,
            )?)
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = entries
        .chunks(cols.max(1))
        .take(rows)
        .map(|r| r.to_vec())
        .collect();
    Ok(LinearMap::from_scalar_rows(
        field,
        cols,
        if cols == 0 {
            vec![Vec::new(); rows]
        } else {
            grid
        },
    )?)
}

fn field_of(v: &Sx) -> Result<Field> {
    match items(v, "field")?.as_slice() {
        [f] => parse_field(f.as_str().ok_or_else(|| bad("field"))?),
        _ => Err(bad("field")),
    }
}

fn read_sheaf(v: &Sx) -> Result<Sheaf> {
    let it = items(v, "sheaf")?;
    let [space, field, window, tails, stalks, maps] = it.as_slice() else {
        return Err(bad("sheaf"));
    };
    let space = read_space(space)?;
    let field = field_of(field)?;
    let (lo, hi) = pair(window, "window")?;
    let (l, r) = pair(tails, "tails")?;
    let stalks = items(stalks, "stalks")?
        .into_iter()
        .map(get_usize)
        .collect::<Result<Vec<_>>>()?;
    let mut table = BTreeMap::new();
    for m in items(maps, "maps")? {
        let parts: Vec<&Sx> = m.list_iter().ok_or_else(|| bad("map"))?.collect();
        let [c, d, mat] = parts.as_slice() else {
            return Err(bad("map"));
        };
        table.insert((get_int(c)?, get_int(d)?), read_matrix(mat, field)?);
    }
    let (l, r) = (
        usize::try_from(l).map_err(|_| bad("tails"))?,
        usize::try_from(r).map_err(|_| bad("tails"))?,
    );
    Ok(Sheaf::new(space, field, lo, hi, stalks, table, l, r)?)
}

fn read_morphism(v: &Sx) -> Result<SheafMorphism> {
    let it = items(v, "morphism")?;
    let [source, target, window, comps, tails] = it.as_slice() else {
        return Err(bad("morphism"));
    };
    let one = |v: &Sx, head: &str| -> Result<Sheaf> {
        match items(v, head)?.as_slice() {
            [s] => read_sheaf(s),
            _ => Err(bad(head)),
        }
    };
    let (source, target) = (one(source, "source")?, one(target, "target")?);
    let field = source.field();
    let (lo, hi) = pair(window, "window")?;
    let comps = items(comps, "components")?
        .into_iter()
        .map(|m| read_matrix(m, field))
        .collect::<Result<_>>()?;
    let tails = items(tails, "tails")?;
    let [l, r] = tails.as_slice() else {
        return Err(bad("tails"));
    };
    Ok(SheafMorphism::new(
        &source,
        &target,
        lo,
        hi,
        comps,
        read_matrix(l, field)?,
        read_matrix(r, field)?,
    )?)
}

fn read_rule(v: &Sx) -> Result<Rule> {
    let head = v
        .list_iter()
        .and_then(|mut i| i.next())
        .and_then(|h| h.as_symbol())
        .ok_or_else(|| bad("rule"))?;
    let it = items(v, head)?;
    match (head, it.as_slice()) {
        ("translate", [s]) => Ok(Rule::Translate(get_int(s)?)),
        ("stretch", [a, b, l, r]) => Ok(Rule::Stretch {
            a: get_int(a)?,
            b: get_int(b)?,
            l: get_int(l)?,
            r: get_int(r)?,
        }),
        ("grow", [d]) => Ok(Rule::Grow(read_sheaf(d)?)),
        _ => Err(bad("rule")),
    }
}

fn read_system(v: &Sx) -> Result<SeqSystem> {
    let it = items(v, "system")?;
    let [cert, levels, transitions] = it.as_slice() else {
        return Err(bad("system"));
    };
    let c = items(cert, "cert")?;
    let [n0, p, rule] = c.as_slice() else {
        return Err(bad("cert"));
    };
    let cert = PeriodCert::new(get_usize(n0)?, get_usize(p)?, read_rule(rule)?)?;
    let levels = items(levels, "levels")?
        .into_iter()
        .map(read_sheaf)
        .collect::<Result<_>>()?;
    let transitions = items(transitions, "transitions")?
        .into_iter()
        .map(read_morphism)
        .collect::<Result<_>>()?;
    SeqSystem::new(levels, transitions, cert)
        .map_err(|e| CliError::Format(format!("certificate rejected on load: {e}")))
}

fn read_dim(v: &Sx) -> Result<DimRecord> {
    let it = items(v, "dim")?;
    let [d, tag] = it.as_slice() else {
        return Err(bad("dim"));
    };
    let dim = match d.as_symbol() {
        Some("inf") => Dim::Infinite,
        _ => Dim::Finite(get_usize(d)?),
    };
    let t: Vec<&Sx> = tag.list_iter().ok_or_else(|| bad("tag"))?.collect();
    let tag = match (t.first().and_then(|h| h.as_symbol()), t.get(1)) {
        (Some("exact"), None) => Tag::Exact,
        (Some("certified"), None) => Tag::Certified,
        (Some("truncated"), Some(n)) => Tag::Truncated(get_usize(n)?),
        _ => return Err(bad("tag")),
    };
    Ok(DimRecord { dim, tag })
}

/// Parses text written by [`save`].
pub fn load(text: &str) -> Result<Object> {
    let (header, body) = text
        .split_once('\n')
        .ok_or_else(|| CliError::Version("missing header".into()))?;
    if header.trim_end() != HEADER {
        return Err(CliError::Version(format!(
            "expected `{HEADER}`, found `{}`",
            header.trim_end()
        )));
    }
    let v = lexpr::from_str(body.trim()).map_err(|e| CliError::Format(e.to_string()))?;
    let head = v
        .list_iter()
        .and_then(|mut i| i.next())
        .and_then(|h| h.as_symbol())
        .ok_or_else(|| bad("object"))?;
    Ok(match head {
        "space" => Object::Space(read_space(&v)?),
        "sheaf" => Object::Sheaf(read_sheaf(&v)?),
        "morphism" => Object::Morphism(read_morphism(&v)?),
        "system" => Object::System(read_system(&v)?),
        "dim" => Object::Dim(read_dim(&v)?),
        other => return Err(CliError::Format(format!("unknown object `{other}`"))),
    })
}
