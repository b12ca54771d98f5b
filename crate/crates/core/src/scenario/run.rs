//! Command dispatch: each command reads its parameters from `[run]`.

use serde_json::{json, Value as Json};

use super::build::Model;
use super::node::{Node, Pos, Value};
use super::report::{list, Report};
use crate::error::{Error, Result};
use crate::galois::{self, DEFAULT_Q_SEARCH_BOUND};
use crate::groups::DEFAULT_ENUMERATION_BOUND;
use crate::hecke::{decompose, fusion_table, hom, tensor, Correspondence, HeckeObject};
use crate::index::{correspondence_of_datum, index_set_c, index_set_i, subfactor_index};
use crate::rational::Q;

pub const COMMANDS: &[&str] =
    &["validate", "compose", "hom", "decompose", "dims", "dual", "fusion", "index", "index-sets", "galois", "eigencheck"];

const DEFAULT_FUSION_BOUND: usize = 64;
const DEFAULT_CUTOFF: u64 = 20;

/// Flags that change results; everything else comes from the scenario.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub truncation: Option<u64>,
}

struct Ctx<'a> {
    model: &'a Model,
    params: Node,
    report: Report,
}

pub fn run(model: &Model, command: &str, opts: &RunOptions) -> Result<Report> {
    if !COMMANDS.contains(&command) {
        return Err(Error::invalid(format!("unknown command `{command}`; expected one of {}", COMMANDS.join(", "))));
    }
    let params = model.run.clone().unwrap_or(Node { pos: Pos { line: 1, column: 1 }, value: Value::Table(Vec::new()) });
    let mut cx = Ctx { model, params, report: Report::new(command, &model.meta.name) };
    match command {
        "validate" => cx.validate()?,
        "compose" => cx.compose()?,
        "hom" => cx.hom()?,
        "decompose" => cx.decompose()?,
        "dims" => cx.dims()?,
        "dual" => cx.dual()?,
        "fusion" => cx.fusion()?,
        "index" => cx.index()?,
        "index-sets" => cx.index_sets(opts)?,
        "galois" => cx.galois(opts)?,
        "eigencheck" => cx.eigencheck()?,
        _ => unreachable!("checked above"),
    }
    Ok(cx.report)
}

impl Ctx<'_> {
    fn param(&self, key: &str) -> Option<&Node> {
        self.params.get(key)
    }

    fn req(&self, key: &str) -> Result<&Node> {
        self.params.get(key).ok_or_else(|| self.params.error(format!("[run] is missing `{key}`")))
    }

    fn set(&mut self, key: &str, v: Json) {
        self.report.results[key] = v;
    }

    fn object_name(&self, o: &HeckeObject) -> String {
        self.model.objects.iter().find(|(_, x)| x.same_as(o)).map_or_else(|| "(unnamed)".to_string(), |(n, _)| n.to_string())
    }

    /// Correspondences named by `key` (a string or a list); all declared ones if absent.
    fn correspondences(&self, key: &str) -> Result<Vec<(String, Correspondence)>> {
        match self.param(key) {
            Some(n) => n
                .as_str_list()?
                .into_iter()
                .map(|r| Ok((r.as_str()?.to_string(), self.model.correspondence_ref(r)?.clone())))
                .collect(),
            None => Ok(self.model.correspondences.iter().map(|(n, c)| (n.to_string(), c.clone())).collect()),
        }
    }

    fn one_correspondence(&self, key: &str) -> Result<(String, Correspondence)> {
        let r = self.req(key)?;
        Ok((r.as_str()?.to_string(), self.model.correspondence_ref(r)?.clone()))
    }

    fn describe(&self, label: &str, c: &Correspondence) -> Result<(Vec<String>, Json)> {
        let (s, t) = (self.object_name(c.source()), self.object_name(c.target()));
        let mut lines = vec![format!("{label}: {s} -> {t}, diml {}, dimr {}", c.diml(), c.dimr())];
        let mut blocks = Vec::new();
        for (b, cd) in c.blocks().iter().zip(c.cosets()) {
            lines.push(format!(
                "  block {}: dim {}, stabilizer {}, left cosets {}, right cosets {}",
                b.gamma,
                b.rep.dim(),
                cd.stabilizer,
                cd.left_cosets,
                cd.right_cosets
            ));
            let mut traces = serde_json::Map::new();
            for g in cd.stabilizer.generators() {
                let t = b.rep.eval(g)?.trace().to_string();
                lines.push(format!("    trace at {g}: {t}"));
                traces.insert(g.to_string(), json!(t));
            }
            blocks.push(json!({
                "gamma": b.gamma.to_string(),
                "dim": b.rep.dim(),
                "stabilizer": cd.stabilizer.to_string(),
                "left_cosets": cd.left_cosets,
                "right_cosets": cd.right_cosets,
                "traces": traces,
            }));
        }
        let v = json!({ "source": s, "target": t, "diml": c.diml(), "dimr": c.dimr(), "blocks": blocks });
        Ok((lines, v))
    }

    fn emit(&mut self, label: &str, c: &Correspondence) -> Result<Json> {
        let (lines, v) = self.describe(label, c)?;
        self.report.lines.extend(lines);
        Ok(v)
    }

    fn validate(&mut self) -> Result<()> {
        let m = self.model;
        let counts = [
            ("subgroups", m.subgroups.len()),
            ("cocycles", m.cocycles.len()),
            ("projreps", m.projreps.len()),
            ("objects", m.objects.len()),
            ("correspondences", m.correspondences.len()),
            ("subfactors", m.subfactors.len()),
            ("divisor_sets", m.divisor_sets.len()),
            ("quotients", m.quotients.len()),
        ];
        let mut cj = json!({});
        for (k, n) in counts {
            self.report.line(format!("{k}: {n}"));
            cj[k] = json!(n);
        }
        for (name, c) in m.cocycles.iter() {
            if !c.verify() {
                return Err(Error::invalid(format!("cocycle `{name}` fails the 2-cocycle identity")));
            }
        }
        let mut reps = Vec::new();
        for (name, r) in m.projreps.iter() {
            let unitary = r.is_unitary();
            self.report.line(format!("projrep {name}: dim {}, unitary {}", r.dim(), if unitary { "yes" } else { "no" }));
            reps.push(json!({ "name": name, "dim": r.dim(), "unitary": unitary }));
        }
        for n in &m.meta.notes {
            self.report.line(format!("assumed: {n}"));
        }
        self.report.line("valid: yes");
        self.set("counts", cj);
        self.set("projreps", json!(reps));
        self.set("assumptions", json!(m.meta.notes));
        self.set("valid", json!(true));
        Ok(())
    }

    fn compose(&mut self) -> Result<()> {
        let (ln, l) = self.one_correspondence("left")?;
        let (rn, r) = self.one_correspondence("right")?;
        let c = tensor(&l, &r)?;
        let v = self.emit(&format!("{ln} ⊗ {rn}"), &c)?;
        self.set("composite", v);
        Ok(())
    }

    fn hom(&mut self) -> Result<()> {
        let (ln, l) = self.one_correspondence("left")?;
        let (rn, r) = self.one_correspondence("right")?;
        let basis = hom(&l, &r)?;
        let mut per = std::collections::BTreeMap::<String, usize>::new();
        for cell in &basis {
            for (k, _) in &cell.components {
                *per.entry(k.to_string()).or_default() += 1;
            }
        }
        self.report.line(format!("dim Hom({ln}, {rn}) = {}", basis.len()));
        for (k, d) in &per {
            self.report.line(format!("  at {k}: {d}"));
        }
        self.set("dim", json!(basis.len()));
        self.set("by_double_coset", json!(per));
        Ok(())
    }

    fn decompose(&mut self) -> Result<()> {
        let (name, c) = self.one_correspondence("target")?;
        let parts = decompose(&c, self.model.meta.seed)?;
        self.report.line(format!("{name} splits into {} irreducible classes", parts.len()));
        let mut out = Vec::new();
        for (i, (p, mult)) in parts.iter().enumerate() {
            let (lines, mut v) = self.describe(&format!("summand {i} (multiplicity {mult})"), p)?;
            self.report.lines.extend(lines);
            v["multiplicity"] = json!(mult);
            out.push(v);
        }
        self.set("summands", json!(out));
        Ok(())
    }

    fn dims(&mut self) -> Result<()> {
        let mut out = Vec::new();
        for (name, c) in self.correspondences("targets")? {
            out.push(self.emit(&name, &c)?);
        }
        self.set("correspondences", json!(out));
        Ok(())
    }

    fn dual(&mut self) -> Result<()> {
        let (name, c) = self.one_correspondence("target")?;
        let d = c.dual()?;
        let v = self.emit(&format!("dual of {name}"), &d)?;
        self.set("dual", v);
        Ok(())
    }

    fn fusion(&mut self) -> Result<()> {
        let objects: Vec<HeckeObject> = match self.param("objects") {
            Some(n) => n.as_str_list()?.into_iter().map(|r| self.model.object_ref(r).cloned()).collect::<Result<_>>()?,
            None => self.model.objects.iter().map(|(_, o)| o.clone()).collect(),
        };
        let gens: Vec<Correspondence> = self.correspondences("generators")?.into_iter().map(|(_, c)| c).collect();
        let bound = match self.param("bound") {
            Some(b) => b.as_u64()? as usize,
            None => DEFAULT_FUSION_BOUND,
        };
        let table = fusion_table(&objects, &gens, bound, self.model.meta.seed)?;
        let mut irr = Vec::new();
        for (i, c) in table.irreducibles.iter().enumerate() {
            irr.push(self.emit(&format!("X{i}"), c)?);
        }
        let mut rows = Vec::new();
        for ((i, j), terms) in &table.products {
            let sum: Vec<String> = terms.iter().map(|(k, m)| if *m == 1 { format!("X{k}") } else { format!("{m} X{k}") }).collect();
            self.report.line(format!("X{i} ⊗ X{j} = {}", sum.join(" + ")));
            let t: Vec<Json> = terms.iter().map(|(k, m)| json!({ "class": k, "multiplicity": m })).collect();
            rows.push(json!({ "left": i, "right": j, "terms": t }));
        }
        self.set("irreducibles", json!(irr));
        self.set("products", json!(rows));
        Ok(())
    }

    fn index(&mut self) -> Result<()> {
        let names: Vec<(String, &crate::index::SubfactorDatum)> = match self.param("subfactors") {
            Some(n) => n
                .as_str_list()?
                .into_iter()
                .map(|r| Ok((r.as_str()?.to_string(), self.model.subfactor_ref(r)?)))
                .collect::<Result<_>>()?,
            None => self.model.subfactors.iter().map(|(n, d)| (n.to_string(), d)).collect(),
        };
        let mut out = Vec::new();
        for (name, d) in names {
            let rep = subfactor_index(d)?;
            let c = correspondence_of_datum(d)?;
            self.report.line(format!("{name}: ell {}, r {}, index {}", rep.ell, rep.r, rep.index));
            let mut entries = Vec::new();
            for e in &rep.entries {
                self.report.line(format!("  entry {}: dim {}, left {}, right {}", e.gamma, e.dim, e.left, e.right));
                entries.push(json!({ "gamma": e.gamma.to_string(), "dim": e.dim, "left": e.left, "right": e.right }));
            }
            out.push(json!({
                "name": name,
                "ell": rep.ell,
                "r": rep.r,
                "index": rep.index,
                "entries": entries,
                "correspondence": { "diml": c.diml(), "dimr": c.dimr() },
            }));
        }
        self.set("subfactors", json!(out));
        Ok(())
    }

    fn index_sets(&mut self, opts: &RunOptions) -> Result<()> {
        let q = self.model.quotient_ref(self.req("quotient")?)?.clone();
        let cutoff = match (opts.truncation, self.param("cutoff")) {
            (Some(t), _) => t,
            (None, Some(c)) => c.as_u64()?,
            (None, None) => DEFAULT_CUTOFF,
        };
        let c = index_set_c(&q, DEFAULT_ENUMERATION_BOUND)?;
        let i = index_set_i(&q, cutoff, DEFAULT_ENUMERATION_BOUND)?;
        self.report.line(format!("C = {}", list(&c)));
        self.report.line(format!("I ∩ [1, {cutoff}] = {}", list(i.iter().map(|t| t.0))));
        for (v, n, m) in &i {
            self.report.line(format!("  {v} = {n}^2 · {m}"));
        }
        let w: Vec<Json> = i.iter().map(|(v, n, m)| json!({ "value": v, "n": n, "m": m })).collect();
        self.set("c", json!(c));
        self.set("cutoff", json!(cutoff));
        self.set("i", json!(w));
        Ok(())
    }

    fn galois(&mut self, opts: &RunOptions) -> Result<()> {
        let set = self.model.divisor_set_ref(self.req("set")?)?.clone();
        let truncation = match (opts.truncation, self.param("truncation")) {
            (Some(t), _) => Some(t as usize),
            (None, Some(t)) => Some(t.as_u64()? as usize),
            (None, None) => None,
        };
        let real = galois::realize(&set, truncation, DEFAULT_Q_SEARCH_BOUND)?;
        self.report.line("n  p  q  root  subgroup order");
        let mut rows = Vec::new();
        for (n, f) in real.factors.iter().enumerate() {
            self.report.line(format!("{n}  {}  {}  {}  {}", f.p, f.q, f.primitive_root, f.subgroup_order));
            rows.push(json!({
                "n": n,
                "p": f.p,
                "q": f.q,
                "primitive_root": f.primitive_root,
                "subgroup_generator": f.subgroup_generator,
                "subgroup_order": f.subgroup_order,
            }));
        }
        let mut sets = vec![json!({ "k": Json::Null, "orders": real.realized_orders(None)? })];
        self.report.line(format!("empty product: {}", list(real.realized_orders(None)?)));
        for k in 0..real.factors.len() {
            let o = real.realized_orders(Some(k))?;
            self.report.line(format!("up to n = {k}: {}", list(&o)));
            sets.push(json!({ "k": k, "orders": o }));
        }
        self.report.line(format!("q = {}", list(real.auxiliary_primes())));
        self.set("factors", json!(rows));
        self.set("q", json!(real.auxiliary_primes()));
        self.set("p", json!(real.primes()));
        self.set("realized", json!(sets));
        self.set("truncation", json!(truncation));
        Ok(())
    }

    fn eigencheck(&mut self) -> Result<()> {
        let qs: Vec<(Q, String)> = self
            .req("q")?
            .as_array()?
            .iter()
            .map(|n| {
                let t = n.as_text()?;
                Ok((Q::parse(&t).map_err(|e| n.error(e.to_string()))?, t))
            })
            .collect::<Result<_>>()?;
        let mut tri = Vec::new();
        if let Some(u) = self.param("unitriangular") {
            for row in u.as_array()? {
                let v = row.as_array()?.iter().map(Node::as_int).collect::<Result<Vec<_>>>()?;
                let [a, b, c] = v[..] else { return Err(row.error("expected [a, b, c]")) };
                tri.push((a, b, c));
            }
        }
        let mut out = Vec::new();
        let mut all = true;
        for (q, _) in &qs {
            let r = galois::verify_sigma_eigenstructure(q, &tri)?;
            all &= r.passed();
            self.report.line(format!("q = {}: {}", r.q, if r.passed() { "pass" } else { "FAIL" }));
            let mut checks = Vec::new();
            for c in &r.checks {
                self.report.line(format!("  {}: {}", c.name, if c.passed { "pass" } else { "FAIL" }));
                checks.push(json!({ "name": c.name, "passed": c.passed }));
            }
            out.push(json!({ "q": r.q.to_string(), "passed": r.passed(), "checks": checks }));
        }
        if !all {
            return Err(Error::invalid("an eigenstructure check failed"));
        }
        self.set("runs", json!(out));
        Ok(())
    }
}
