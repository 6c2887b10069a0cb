//! Line-oriented text formats for factored sets, models, distributions and
//! orthogonality databases.
//!
//! Every format is UTF-8 with `#` comments. Partitions are written
//! `{ a b | c d }`, with `_` for the indiscrete and `!` for the discrete
//! partition. Element tokens are labels when a `labels` line is present and
//! decimal indices otherwise.

use std::collections::HashSet;

use indexmap::IndexMap;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::factored_set::FactoredSet;
use crate::inference::{Model, OrthogonalityDatabase, Triple, DISCRETE_NAME, INDISCRETE_NAME};
use crate::partitions::{ElementSet, GroundSet, Partition};
use crate::probability::FactoredDistribution;

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        for word in content.split_whitespace() {
            // braces and bars are tokens of their own even without spaces
            let mut start = 0;
            for (j, ch) in word.char_indices() {
                if matches!(ch, '{' | '}' | '|') {
                    if start < j {
                        tokens.push(&word[start..j]);
                    }
                    tokens.push(&word[j..j + 1]);
                    start = j + 1;
                }
            }
            if start < word.len() {
                tokens.push(&word[start..]);
            }
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, tokens });
        }
    }
    out
}

struct Ctx<'a> {
    file: &'a str,
}

impl Ctx<'_> {
    fn err(&self, line: usize, token: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            file: self.file.to_string(),
            line,
            token: token.to_string(),
            message: message.into(),
        }
    }

    fn element(&self, ground: &GroundSet, line: usize, token: &str) -> Result<usize> {
        ground
            .lookup(token)
            .ok_or_else(|| self.err(line, token, "unknown element"))
    }

    /// Parses `{ .. | .. }`, `_` or `!` starting at `tokens[0]`; returns the
    /// partition and the number of tokens consumed.
    fn partition(&self, ground: &GroundSet, line: usize, tokens: &[&str]) -> Result<(Partition, usize)> {
        let n = ground.size();
        let Some(&first) = tokens.first() else {
            return Err(self.err(line, "", "expected a partition"));
        };
        match first {
            "_" => return Ok((Partition::indiscrete(n), 1)),
            "!" => return Ok((Partition::discrete(n), 1)),
            "{" => {}
            other => return Err(self.err(line, other, "expected `{`, `_` or `!`")),
        }
        let mut keys: Vec<Option<usize>> = vec![None; n];
        let mut block = 0;
        let mut block_has_element = false;
        for (i, &tok) in tokens.iter().enumerate().skip(1) {
            match tok {
                "|" | "}" => {
                    if !block_has_element {
                        return Err(self.err(line, tok, "empty block"));
                    }
                    if tok == "}" {
                        if let Some(s) = keys.iter().position(Option::is_none) {
                            return Err(self.err(line, tok, format!("element {} is not in any block", ground.name(s))));
                        }
                        return Ok((Partition::from_keys(&keys), i + 1));
                    }
                    block += 1;
                    block_has_element = false;
                }
                "{" => return Err(self.err(line, tok, "nested `{`")),
                _ => {
                    let s = self.element(ground, line, tok)?;
                    if keys[s].is_some() {
                        return Err(self.err(line, tok, "element appears twice"));
                    }
                    keys[s] = Some(block);
                    block_has_element = true;
                }
            }
        }
        Err(self.err(line, tokens.last().unwrap(), "missing `}`"))
    }

    fn name<'t>(&self, line: usize, tokens: &[&'t str], i: usize, what: &str) -> Result<&'t str> {
        let tok = tokens
            .get(i)
            .copied()
            .ok_or_else(|| self.err(line, tokens.last().copied().unwrap_or(""), format!("expected {what}")))?;
        if matches!(tok, "{" | "}" | "|") {
            return Err(self.err(line, tok, format!("expected {what}")));
        }
        Ok(tok)
    }

    fn end(&self, line: usize, tokens: &[&str], used: usize) -> Result<()> {
        match tokens.get(used) {
            Some(tok) => Err(self.err(line, tok, "unexpected trailing token")),
            None => Ok(()),
        }
    }
}

/// Parses `set N` / `omega N` followed by an optional `labels` line.
fn ground_header(ctx: &Ctx, lines: &[Line], keyword: &str) -> Result<(GroundSet, usize)> {
    let Some(first) = lines.first() else {
        return Err(ctx.err(0, "", format!("empty file, expected `{keyword} N`")));
    };
    if first.tokens[0] != keyword || first.tokens.len() != 2 {
        return Err(ctx.err(first.number, first.tokens[0], format!("expected `{keyword} N`")));
    }
    let size: usize = first.tokens[1]
        .parse()
        .map_err(|_| ctx.err(first.number, first.tokens[1], "expected a size"))?;
    if let Some(second) = lines.get(1) {
        if second.tokens[0] == "labels" {
            let labels: Vec<String> = second.tokens[1..].iter().map(|s| s.to_string()).collect();
            if labels.len() != size {
                return Err(ctx.err(
                    second.number,
                    "labels",
                    format!("{} labels for a set of size {size}", labels.len()),
                ));
            }
            for l in &labels {
                if matches!(l.as_str(), "_" | "!") {
                    return Err(ctx.err(second.number, l, "reserved label"));
                }
            }
            let ground = GroundSet::with_labels(labels).map_err(|e| ctx.err(second.number, "labels", e.to_string()))?;
            return Ok((ground, 2));
        }
    }
    Ok((GroundSet::new(size), 1))
}

/// A `map` line of a model file, resolved once Ω is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapLine {
    pub line: usize,
    pub element: usize,
    pub target: String,
}

/// A factored set together with the names used in its file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredSetDoc {
    pub file: String,
    pub ground: GroundSet,
    pub factored: FactoredSet,
    /// Name of each factor, indexed like `factored.factors()`.
    pub factor_names: Vec<String>,
    pub partitions: IndexMap<String, Partition>,
    pub maps: Vec<MapLine>,
}

impl FactoredSetDoc {
    /// A document for a set without names, with factors called `F0`, `F1`, ...
    pub fn unnamed(factored: FactoredSet) -> Self {
        FactoredSetDoc {
            file: String::new(),
            ground: GroundSet::new(factored.size()),
            factor_names: (0..factored.dim()).map(|b| format!("F{b}")).collect(),
            factored,
            partitions: IndexMap::new(),
            maps: Vec::new(),
        }
    }

    /// A factor, a named partition, `_` or `!`.
    pub fn resolve(&self, name: &str) -> Result<Partition> {
        let n = self.ground.size();
        match name {
            INDISCRETE_NAME => Ok(Partition::indiscrete(n)),
            DISCRETE_NAME => Ok(Partition::discrete(n)),
            _ => {
                if let Some(b) = self.factor_names.iter().position(|f| f == name) {
                    return Ok(self.factored.factor(b).clone());
                }
                self.partitions
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::UnknownPartition(name.to_string()))
            }
        }
    }

    /// Whitespace-separated element tokens.
    pub fn event(&self, text: &str) -> Result<ElementSet> {
        parse_event(&self.ground, text)
    }

    /// Builds the model described by the `map` lines against Ω.
    pub fn model(&self, omega: &GroundSet) -> Result<Model> {
        let ctx = Ctx { file: &self.file };
        let mut labeling: Vec<Option<usize>> = vec![None; self.ground.size()];
        for m in &self.maps {
            let w = omega
                .lookup(&m.target)
                .ok_or_else(|| ctx.err(m.line, &m.target, "unknown element of Ω"))?;
            labeling[m.element] = Some(w);
        }
        if let Some(s) = labeling.iter().position(Option::is_none) {
            return Err(ctx.err(0, &self.ground.name(s), "element has no `map` line"));
        }
        Model::new(
            self.factored.clone(),
            labeling.into_iter().map(Option::unwrap).collect(),
            omega.size(),
        )
    }
}

pub fn parse_event(ground: &GroundSet, text: &str) -> Result<ElementSet> {
    let mut e = ElementSet::empty(ground.size());
    for tok in text.split_whitespace() {
        let s = ground.lookup(tok).ok_or_else(|| Error::Parse {
            file: "<event>".into(),
            line: 1,
            token: tok.to_string(),
            message: "unknown element".into(),
        })?;
        e.insert(s);
    }
    Ok(e)
}

/// Parses a partition in `{ .. | .. }` syntax over `ground`.
pub fn parse_partition(ground: &GroundSet, text: &str) -> Result<Partition> {
    let ctx = Ctx { file: "<partition>" };
    let lines = tokenize(text);
    let tokens: Vec<&str> = lines.iter().flat_map(|l| l.tokens.iter().copied()).collect();
    let (p, used) = ctx.partition(ground, 1, &tokens)?;
    ctx.end(1, &tokens, used)?;
    Ok(p)
}

pub fn parse_factored_set(text: &str, file: &str) -> Result<FactoredSetDoc> {
    let ctx = Ctx { file };
    let lines = tokenize(text);
    let (ground, skip) = ground_header(&ctx, &lines, "set")?;
    let mut names: HashSet<String> = HashSet::new();
    let mut factor_list: Vec<(String, Partition)> = Vec::new();
    let mut partitions = IndexMap::new();
    let mut maps = Vec::new();
    let mut mapped = HashSet::new();
    for line in &lines[skip..] {
        let t = &line.tokens;
        let n = line.number;
        match t[0] {
            "factor" | "partition" => {
                let name = ctx.name(n, t, 1, "a name")?;
                if matches!(name, "_" | "!") {
                    return Err(ctx.err(n, name, "reserved name"));
                }
                if !names.insert(name.to_string()) {
                    return Err(ctx.err(n, name, "name declared twice"));
                }
                let (p, used) = ctx.partition(&ground, n, &t[2..])?;
                ctx.end(n, t, used + 2)?;
                if t[0] == "factor" {
                    factor_list.push((name.to_string(), p));
                } else {
                    partitions.insert(name.to_string(), p);
                }
            }
            "map" => {
                if t.len() != 4 || t[2] != "->" {
                    return Err(ctx.err(n, t[0], "expected `map <element> -> <target>`"));
                }
                let s = ctx.element(&ground, n, t[1])?;
                if !mapped.insert(s) {
                    return Err(ctx.err(n, t[1], "element mapped twice"));
                }
                maps.push(MapLine {
                    line: n,
                    element: s,
                    target: t[3].to_string(),
                });
            }
            "labels" => return Err(ctx.err(n, t[0], "`labels` must directly follow `set`")),
            other => return Err(ctx.err(n, other, "unknown directive")),
        }
    }
    let parts: Vec<Partition> = factor_list.iter().map(|(_, p)| p.clone()).collect();
    let factored = FactoredSet::validate(ground.size(), &parts).map_err(|e| {
        ctx.err(
            lines.first().map_or(0, |l| l.number),
            "factor",
            format!("not a factorization: {e}"),
        )
    })?;
    let mut factor_names = vec![String::new(); factored.dim()];
    for (name, p) in &factor_list {
        let b = factored.index_of_factor(p).expect("validated factor");
        if !factor_names[b].is_empty() {
            return Err(ctx.err(0, name, format!("same factor as `{}`", factor_names[b])));
        }
        factor_names[b] = name.clone();
    }
    Ok(FactoredSetDoc {
        file: file.to_string(),
        ground,
        factored,
        factor_names,
        partitions,
        maps,
    })
}

pub fn parse_distribution(text: &str, file: &str, doc: &FactoredSetDoc) -> Result<FactoredDistribution> {
    let ctx = Ctx { file };
    let mut weights: Vec<Option<Vec<BigRational>>> = vec![None; doc.factored.dim()];
    let mut last_line = 0;
    for line in tokenize(text) {
        let t = &line.tokens;
        let n = line.number;
        last_line = n;
        if t[0] != "weights" {
            return Err(ctx.err(n, t[0], "expected `weights <factor> p/q ...`"));
        }
        let name = ctx.name(n, t, 1, "a factor name")?;
        let b = doc
            .factor_names
            .iter()
            .position(|f| f == name)
            .ok_or_else(|| ctx.err(n, name, "unknown factor"))?;
        if weights[b].is_some() {
            return Err(ctx.err(n, name, "weights given twice"));
        }
        let values = t[2..]
            .iter()
            .map(|tok| {
                tok.parse::<BigRational>()
                    .map_err(|_| ctx.err(n, tok, "expected a fraction p/q"))
            })
            .collect::<Result<Vec<_>>>()?;
        weights[b] = Some(values);
    }
    if let Some(b) = weights.iter().position(Option::is_none) {
        return Err(ctx.err(last_line, &doc.factor_names[b], "no weights for factor"));
    }
    FactoredDistribution::new(&doc.factored, weights.into_iter().map(Option::unwrap).collect())
        .map_err(|e| ctx.err(last_line, "weights", e.to_string()))
}

pub fn parse_database(text: &str, file: &str) -> Result<OrthogonalityDatabase> {
    let ctx = Ctx { file };
    let lines = tokenize(text);
    let (omega, skip) = ground_header(&ctx, &lines, "omega")?;
    let mut db = OrthogonalityDatabase::new(omega.clone());
    for line in &lines[skip..] {
        let t = &line.tokens;
        let n = line.number;
        match t[0] {
            "partition" => {
                let name = ctx.name(n, t, 1, "a name")?;
                let (p, used) = ctx.partition(&omega, n, &t[2..])?;
                ctx.end(n, t, used + 2)?;
                db.declare(name, p).map_err(|e| ctx.err(n, name, e.to_string()))?;
            }
            "orthogonal" | "dependent" => {
                if t.len() != 5 || t[3] != "|" {
                    return Err(ctx.err(n, t[0], format!("expected `{} A B | C`", t[0])));
                }
                let triple = Triple::new(t[1], t[2], t[4]);
                let added = if t[0] == "orthogonal" {
                    db.add_orthogonal(triple)
                } else {
                    db.add_dependent(triple)
                };
                added.map_err(|e| match e {
                    Error::UnknownPartition(name) => ctx.err(n, &name, "unknown partition"),
                    other => ctx.err(n, t[0], other.to_string()),
                })?;
            }
            "labels" => return Err(ctx.err(n, t[0], "`labels` must directly follow `omega`")),
            other => return Err(ctx.err(n, other, "unknown directive")),
        }
    }
    Ok(db)
}

pub fn render_partition(ground: &GroundSet, p: &Partition) -> String {
    let blocks: Vec<String> = p
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&s| ground.name(s)).collect::<Vec<_>>().join(" "))
        .collect();
    if blocks.is_empty() {
        return "{ }".to_string();
    }
    format!("{{ {} }}", blocks.join(" | "))
}

pub fn render_event(ground: &GroundSet, e: &ElementSet) -> String {
    let names: Vec<String> = e.iter().map(|s| ground.name(s)).collect();
    format!("{{{}}}", names.join(", "))
}

fn ground_lines(out: &mut String, keyword: &str, ground: &GroundSet) {
    out.push_str(&format!("{keyword} {}\n", ground.size()));
    if let Some(labels) = ground.labels() {
        out.push_str(&format!("labels {}\n", labels.join(" ")));
    }
}

pub fn render_factored_set(doc: &FactoredSetDoc) -> String {
    let mut out = String::new();
    ground_lines(&mut out, "set", &doc.ground);
    for (b, name) in doc.factor_names.iter().enumerate() {
        out.push_str(&format!(
            "factor {name} {}\n",
            render_partition(&doc.ground, doc.factored.factor(b))
        ));
    }
    for (name, p) in &doc.partitions {
        out.push_str(&format!("partition {name} {}\n", render_partition(&doc.ground, p)));
    }
    for m in &doc.maps {
        out.push_str(&format!("map {} -> {}\n", doc.ground.name(m.element), m.target));
    }
    out
}

/// A model file: the factored set with one `map` line per element.
pub fn render_model(doc: &FactoredSetDoc, model: &Model, omega: &GroundSet) -> String {
    let mut doc = doc.clone();
    doc.maps = model
        .labeling()
        .iter()
        .enumerate()
        .map(|(s, &w)| MapLine {
            line: 0,
            element: s,
            target: omega.name(w),
        })
        .collect();
    render_factored_set(&doc)
}

pub fn render_database(db: &OrthogonalityDatabase) -> String {
    let mut out = String::new();
    ground_lines(&mut out, "omega", db.omega());
    for (name, p) in db.partitions() {
        out.push_str(&format!("partition {name} {}\n", render_partition(db.omega(), p)));
    }
    for t in db.orthogonal() {
        out.push_str(&format!("orthogonal {t}\n"));
    }
    for t in db.dependent() {
        out.push_str(&format!("dependent {t}\n"));
    }
    out
}

pub fn render_distribution(doc: &FactoredSetDoc, p: &FactoredDistribution) -> String {
    let mut out = String::new();
    for (name, w) in doc.factor_names.iter().zip(p.weights()) {
        let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("weights {name} {}\n", ws.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factored_set::enumerate_factorizations;

    const EX1: &str = "\
# two bits
set 4
labels 00 01 10 11
factor X { 00 01 | 10 11 }
factor V { 00 11 | 01 10 }   # parity
partition Y { 00 10 | 01 11 }
";

    const DB: &str = "\
omega 4
labels 00 01 10 11
partition X { 00 01 | 10 11 }
partition V { 00 11 | 01 10 }
partition Y { 00 10 | 01 11 }
orthogonal X V | _
dependent  V V | _
";

    fn parse_err(r: Result<impl std::fmt::Debug>) -> (usize, String, String) {
        match r {
            Err(Error::Parse {
                line, token, message, ..
            }) => (line, token, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn factored_set_file() {
        let doc = parse_factored_set(EX1, "ex1.ffs").unwrap();
        assert_eq!(doc.factored.dim(), 2);
        let x = doc.resolve("X").unwrap();
        assert_eq!(x, Partition::from_blocks(4, &[[0, 1], [2, 3]]).unwrap());
        assert_eq!(
            doc.resolve("Y").unwrap(),
            Partition::from_blocks(4, &[[0, 2], [1, 3]]).unwrap()
        );
        assert_eq!(doc.resolve("_").unwrap(), Partition::indiscrete(4));
        assert!(matches!(doc.resolve("Q"), Err(Error::UnknownPartition(_))));
        let b = doc.factored.index_of_factor(&x).unwrap();
        assert_eq!(doc.factor_names[b], "X");
        assert_eq!(doc.event("00 11").unwrap().to_vec(), vec![0, 3]);
    }

    #[test]
    fn compact_partition_syntax() {
        let g = GroundSet::new(3);
        assert_eq!(
            parse_partition(&g, "{0 1|2}").unwrap(),
            Partition::from_blocks(3, &[vec![0, 1], vec![2]]).unwrap()
        );
        assert_eq!(parse_partition(&g, "!").unwrap(), Partition::discrete(3));
    }

    #[test]
    fn parse_errors_cite_line_and_token() {
        let bad = EX1.replace("factor V { 00 11 | 01 10 }", "factor V { 00 11 | 01 1O }");
        let (line, token, _) = parse_err(parse_factored_set(&bad, "f"));
        assert_eq!((line, token.as_str()), (5, "1O"));

        let bad = EX1.replace("{ 00 10 | 01 11 }", "{ 00 10 | 01 }");
        let (line, _, msg) = parse_err(parse_factored_set(&bad, "f"));
        assert_eq!(line, 6);
        assert!(msg.contains("11"), "{msg}");

        let bad = EX1.replace("{ 00 10 | 01 11 }", "{ 00 10 | | 01 11 }");
        assert_eq!(parse_err(parse_factored_set(&bad, "f")).2, "empty block");

        let bad = EX1.replace(
            "factor V { 00 11 | 01 10 }",
            "factor V { 00 10 | 01 11 }\nfactor W { 00 11 | 01 10 }",
        );
        let (_, token, msg) = parse_err(parse_factored_set(&bad, "f"));
        assert_eq!(token, "factor");
        assert!(msg.contains("not a factorization"), "{msg}");

        let (line, token, _) = parse_err(parse_factored_set("set 2\nfrob 1", "f"));
        assert_eq!((line, token.as_str()), (2, "frob"));

        let (_, token, _) = parse_err(parse_database(
            &DB.replace("dependent  V V | _", "dependent V Q | _"),
            "d",
        ));
        assert_eq!(token, "Q");
    }

    #[test]
    fn database_file() {
        let db = parse_database(DB, "ex1.db").unwrap();
        assert_eq!(db.orthogonal(), &[Triple::new("X", "V", "_")]);
        assert_eq!(db.dependent(), &[Triple::new("V", "V", "_")]);
        assert_eq!(parse_database(&render_database(&db), "again").unwrap(), db);
    }

    #[test]
    fn model_file() {
        let db = parse_database(DB, "ex1.db").unwrap();
        let text = format!("{EX1}map 00 -> 00\nmap 01 -> 01\nmap 10 -> 10\nmap 11 -> 11\n");
        let doc = parse_factored_set(&text, "m").unwrap();
        let model = doc.model(db.omega()).unwrap();
        assert_eq!(model.labeling(), &[0, 1, 2, 3]);
        let again = parse_factored_set(&render_model(&doc, &model, db.omega()), "m2").unwrap();
        assert_eq!(again.model(db.omega()).unwrap(), model);

        let missing = parse_factored_set(&format!("{EX1}map 00 -> 00\n"), "m").unwrap();
        assert!(matches!(missing.model(db.omega()), Err(Error::Parse { .. })));
    }

    #[test]
    fn distribution_file() {
        let doc = parse_factored_set(EX1, "ex1.ffs").unwrap();
        let p = parse_distribution("weights X 1/3 2/3\nweights V 1/2 1/2\n", "p", &doc).unwrap();
        assert_eq!(
            parse_distribution(&render_distribution(&doc, &p), "p2", &doc).unwrap(),
            p
        );
        let (_, token, _) = parse_err(parse_distribution("weights X 1/3 2/3\n", "p", &doc));
        assert_eq!(token, "V");
        assert!(parse_distribution("weights X 1/3 1/3\nweights V 1/2 1/2\n", "p", &doc).is_err());
        let (_, token, _) = parse_err(parse_distribution("weights X 1/3 x\nweights V 1/2 1/2\n", "p", &doc));
        assert_eq!(token, "x");
    }

    #[test]
    fn factored_sets_round_trip() {
        for n in [1, 4, 6, 8] {
            for fs in enumerate_factorizations(n) {
                let doc = FactoredSetDoc::unnamed(fs);
                let again = parse_factored_set(&render_factored_set(&doc), "rt").unwrap();
                assert_eq!(again.factored, doc.factored);
                assert_eq!(again.factor_names, doc.factor_names);
            }
        }
        let doc = parse_factored_set(EX1, "ex1.ffs").unwrap();
        let again = parse_factored_set(&render_factored_set(&doc), "ex1.ffs").unwrap();
        assert_eq!(again, doc);
    }
}
