//! Turning a scenario document into library objects.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::node::{Node, Value};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::galois::{DivisorClosedSet, Exponent};
use crate::groups::{coset_data, parse_rat, AmbientGroup, Backend, GroupElement, Perm, Subgroup};
use crate::hecke::refined_domain;
use crate::hecke::{required_obstruction, Block, Correspondence, HeckeObject};
use crate::index::{QuotientGroup, SubfactorDatum};
use crate::matrix::CMat;
use crate::projective::{Cocycle2, Domain, ProjRep};

const SECTIONS: &[&str] = &[
    "format",
    "meta",
    "ambient",
    "subgroups",
    "cocycles",
    "projreps",
    "objects",
    "correspondences",
    "subfactors",
    "divisor_sets",
    "quotients",
    "run",
];

/// Named declarations of one kind, in document order.
#[derive(Clone, Debug)]
pub struct Registry<T> {
    names: Vec<String>,
    items: HashMap<String, T>,
}

impl<T> Default for Registry<T> {
    fn default() -> Self {
        Registry { names: Vec::new(), items: HashMap::new() }
    }
}

impl<T> Registry<T> {
    pub fn get(&self, name: &str) -> Option<&T> {
        self.items.get(name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &T)> {
        self.names.iter().map(|n| (n.as_str(), &self.items[n]))
    }

    fn insert(&mut self, name: &str, item: T) {
        self.names.push(name.to_string());
        self.items.insert(name.to_string(), item);
    }
}

#[derive(Clone, Debug, Default)]
pub struct Meta {
    pub name: String,
    pub seed: u64,
    /// Default cyclotomic order for cocycle values and matrix entries.
    pub order: u32,
    /// Analytic hypotheses recorded but not checked.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct Model {
    pub meta: Meta,
    pub ambient: Option<AmbientGroup>,
    pub subgroups: Registry<Subgroup>,
    pub cocycles: Registry<Cocycle2>,
    pub projreps: Registry<ProjRep>,
    pub objects: Registry<HeckeObject>,
    pub correspondences: Registry<Correspondence>,
    pub subfactors: Registry<SubfactorDatum>,
    pub divisor_sets: Registry<DivisorClosedSet>,
    pub quotients: Registry<QuotientGroup>,
    pub run: Option<Node>,
}

/// Attach the position of `n` to messages that carry none.
fn at(n: &Node) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Invalid(m) => n.error(m),
        other => other,
    }
}

fn kind_of(n: &Node) -> Result<&str> {
    n.req("kind")?.as_str()
}

impl Model {
    pub fn build(doc: &Node) -> Result<Model> {
        doc.only_keys(SECTIONS)?;
        let version = doc.req("format")?;
        if version.as_int()? != 1 {
            return Err(version.error("unsupported format version (expected 1)"));
        }
        let mut m = Model::default();
        m.meta = Self::meta(doc.get("meta"))?;
        if let Some(a) = doc.get("ambient") {
            m.ambient = Some(Self::parse_ambient(a)?);
        }
        m.section(doc, "subgroups", |m, n| m.subgroup(n), |m| &mut m.subgroups)?;
        m.section(doc, "cocycles", |m, n| m.cocycle(n), |m| &mut m.cocycles)?;
        m.section(doc, "projreps", |m, n| m.projrep(n), |m| &mut m.projreps)?;
        m.section(doc, "objects", |m, n| m.object(n), |m| &mut m.objects)?;
        m.section(doc, "correspondences", |m, n| m.correspondence(n), |m| &mut m.correspondences)?;
        m.section(doc, "subfactors", |m, n| m.subfactor(n), |m| &mut m.subfactors)?;
        m.section(doc, "divisor_sets", |_, n| Self::divisor_set(n), |m| &mut m.divisor_sets)?;
        m.section(doc, "quotients", |m, n| m.quotient(n), |m| &mut m.quotients)?;
        if let Some(r) = doc.get("run") {
            r.entries()?;
            m.run = Some(r.clone());
        }
        Ok(m)
    }

    fn section<T>(
        &mut self,
        doc: &Node,
        key: &str,
        make: impl Fn(&Model, &Node) -> Result<T>,
        reg: impl Fn(&mut Model) -> &mut Registry<T>,
    ) -> Result<()> {
        let Some(sec) = doc.get(key) else { return Ok(()) };
        for (name, body) in sec.entries()? {
            body.entries()?;
            let item = make(self, body)?;
            reg(self).insert(name, item);
        }
        Ok(())
    }

    fn meta(n: Option<&Node>) -> Result<Meta> {
        let mut meta = Meta { order: 1, ..Meta::default() };
        let Some(n) = n else { return Ok(meta) };
        n.only_keys(&["name", "seed", "order", "notes"])?;
        if let Some(v) = n.get("name") {
            meta.name = v.as_str()?.to_string();
        }
        if let Some(v) = n.get("seed") {
            meta.seed = v.as_u64()?;
        }
        if let Some(v) = n.get("order") {
            meta.order = positive_u32(v)?;
        }
        if let Some(v) = n.get("notes") {
            meta.notes = v.as_str_list()?.iter().map(|x| x.as_str().map(str::to_string)).collect::<Result<_>>()?;
        }
        Ok(meta)
    }

    fn parse_ambient(n: &Node) -> Result<AmbientGroup> {
        match kind_of(n)? {
            "permutation" => {
                n.only_keys(&["kind", "degree", "generators"])?;
                let degree = n.req("degree")?.as_u64()? as usize;
                let gens = perm_list(n.req("generators")?, degree)?;
                AmbientGroup::permutation(degree, gens).map_err(at(n))
            }
            "lattice" => {
                n.only_keys(&["kind", "rank"])?;
                AmbientGroup::lattice(n.req("rank")?.as_u64()? as usize).map_err(at(n))
            }
            other => Err(n.req("kind")?.error(format!("unknown ambient kind `{other}`"))),
        }
    }

    /// Which declaration section, if any, holds `name`.
    fn section_of(&self, name: &str) -> Option<&'static str> {
        [
            ("subgroup", self.subgroups.get(name).is_some()),
            ("cocycle", self.cocycles.get(name).is_some()),
            ("projrep", self.projreps.get(name).is_some()),
            ("object", self.objects.get(name).is_some()),
            ("correspondence", self.correspondences.get(name).is_some()),
            ("subfactor", self.subfactors.get(name).is_some()),
            ("divisor set", self.divisor_sets.get(name).is_some()),
            ("quotient", self.quotients.get(name).is_some()),
        ]
        .into_iter()
        .find_map(|(k, hit)| hit.then_some(k))
    }

    fn missing(&self, r: &Node, name: &str, want: &str) -> Error {
        match self.section_of(name) {
            Some(kind) => Error::TypeMismatch { name: name.to_string(), message: format!("is a {kind}, expected a {want}") },
            None => Error::UnknownReference { name: name.to_string(), line: r.pos.line, column: r.pos.column },
        }
    }

    fn lookup<'a, T>(&self, reg: &'a Registry<T>, r: &Node, want: &str) -> Result<&'a T> {
        let name = r.as_str()?;
        reg.get(name).ok_or_else(|| self.missing(r, name, want))
    }

    pub fn subgroup_ref(&self, r: &Node) -> Result<&Subgroup> {
        self.lookup(&self.subgroups, r, "subgroup")
    }

    pub fn cocycle_ref(&self, r: &Node) -> Result<&Cocycle2> {
        self.lookup(&self.cocycles, r, "cocycle")
    }

    pub fn projrep_ref(&self, r: &Node) -> Result<&ProjRep> {
        self.lookup(&self.projreps, r, "projrep")
    }

    pub fn object_ref(&self, r: &Node) -> Result<&HeckeObject> {
        self.lookup(&self.objects, r, "object")
    }

    pub fn correspondence_ref(&self, r: &Node) -> Result<&Correspondence> {
        self.lookup(&self.correspondences, r, "correspondence")
    }

    pub fn subfactor_ref(&self, r: &Node) -> Result<&SubfactorDatum> {
        self.lookup(&self.subfactors, r, "subfactor")
    }

    pub fn divisor_set_ref(&self, r: &Node) -> Result<&DivisorClosedSet> {
        self.lookup(&self.divisor_sets, r, "divisor set")
    }

    pub fn quotient_ref(&self, r: &Node) -> Result<&QuotientGroup> {
        self.lookup(&self.quotients, r, "quotient")
    }

    fn ambient_for(&self, n: &Node) -> Result<&AmbientGroup> {
        self.ambient.as_ref().ok_or_else(|| n.error("group elements need an [ambient] section"))
    }

    pub fn element(&self, n: &Node) -> Result<GroupElement> {
        let amb = self.ambient_for(n)?;
        let g = match amb.backend() {
            Backend::Permutation { degree } => {
                GroupElement::Perm(Perm::parse_cycles(n.as_str()?, degree).map_err(at(n))?)
            }
            Backend::Lattice { rank } => GroupElement::Vector(vector(n, rank)?),
        };
        amb.check(&g).map_err(at(n))?;
        Ok(g)
    }

    fn elements(&self, n: &Node) -> Result<Vec<GroupElement>> {
        n.as_array()?.iter().map(|x| self.element(x)).collect()
    }

    fn subgroup(&self, n: &Node) -> Result<Subgroup> {
        let amb = self.ambient_for(n)?;
        if let Some(w) = n.get("whole") {
            n.only_keys(&["whole"])?;
            if !w.as_bool()? {
                return Err(w.error("`whole` must be true when present"));
            }
            return amb.whole().map_err(at(n));
        }
        if let Some(of) = n.get("conjugate") {
            n.only_keys(&["conjugate", "by"])?;
            let gamma = self.element(n.req("by")?)?;
            return self.subgroup_ref(of)?.conjugate_by(&gamma).map_err(at(n));
        }
        if let Some(of) = n.get("intersect") {
            n.only_keys(&["intersect"])?;
            let list = of.as_str_list()?;
            let mut acc = self.subgroup_ref(list.first().ok_or_else(|| of.error("empty intersection"))?)?.clone();
            for r in &list[1..] {
                acc = acc.intersect(self.subgroup_ref(r)?).map_err(at(n))?;
            }
            return Ok(acc);
        }
        n.only_keys(&["generators"])?;
        let gens = self.elements(n.req("generators")?)?;
        Subgroup::generated(amb, &gens).map_err(at(n))
    }

    fn order_of(&self, n: &Node) -> Result<u32> {
        n.get("order").map_or(Ok(self.meta.order), positive_u32)
    }

    fn period(&self, n: &Node) -> Result<Option<&Subgroup>> {
        n.get("period").map(|p| self.subgroup_ref(p)).transpose()
    }

    /// The finite model named by `group` and the optional `period`.
    fn domain(&self, n: &Node, default_period_is_group: bool) -> Result<Arc<Domain>> {
        let g = self.subgroup_ref(n.req("group")?)?;
        let p = match self.period(n)? {
            Some(p) => Some(p),
            None if default_period_is_group => Some(g),
            None => None,
        };
        Domain::new(g, p).map_err(at(n))
    }

    fn cocycle(&self, n: &Node) -> Result<Cocycle2> {
        let kind = kind_of(n)?;
        match kind {
            "trivial" => {
                n.only_keys(&["kind", "group", "order", "period"])?;
                Ok(Cocycle2::trivial(&self.domain(n, true)?, self.order_of(n)?))
            }
            "table" => {
                n.only_keys(&["kind", "group", "order", "period", "values"])?;
                let dom = self.domain(n, false)?;
                let len = dom.len();
                let mut table = vec![0u32; len * len];
                let order = self.order_of(n)?;
                for e in n.req("values")?.as_array()? {
                    e.only_keys(&["g", "h", "k"])?;
                    let i = self.locate(&dom, e.req("g")?)?;
                    let j = self.locate(&dom, e.req("h")?)?;
                    table[i * len + j] = e.req("k")?.as_int()?.rem_euclid(order as i64) as u32;
                }
                let c = Cocycle2::from_table(&dom, order, table).map_err(at(n))?;
                if !c.verify() {
                    return Err(n.error("table does not satisfy the 2-cocycle identity"));
                }
                Ok(c)
            }
            "bilinear" => {
                n.only_keys(&["kind", "group", "order", "period", "form"])?;
                let g = self.subgroup_ref(n.req("group")?)?;
                let order = self.order_of(n)?;
                let form_node = n.req("form")?;
                let rank = g.lattice().ok_or_else(|| n.error("bilinear cocycles need a lattice group"))?.rank();
                let form: Vec<Vec<_>> = form_node
                    .as_array()?
                    .iter()
                    .map(|row| vector(row, rank))
                    .collect::<Result<_>>()?;
                if form.len() != rank {
                    return Err(form_node.error(format!("form must be {rank}x{rank}")));
                }
                let period = match self.period(n)? {
                    Some(p) => p.clone(),
                    None => Cocycle2::bilinear_period(g, order, &form).map_err(at(n))?,
                };
                let dom = Domain::new(g, Some(&period)).map_err(at(n))?;
                Cocycle2::bilinear(&dom, order, &form).map_err(at(n))
            }
            "product" => {
                n.only_keys(&["kind", "of"])?;
                let of = n.req("of")?;
                let list = of.as_str_list()?;
                let mut acc = self.cocycle_ref(list.first().ok_or_else(|| of.error("empty product"))?)?.clone();
                for r in &list[1..] {
                    acc = acc.product(self.cocycle_ref(r)?).map_err(at(n))?;
                }
                Ok(acc)
            }
            "conjugate" => {
                n.only_keys(&["kind", "of"])?;
                Ok(self.cocycle_ref(n.req("of")?)?.conjugate())
            }
            "restrict" => {
                n.only_keys(&["kind", "of", "to"])?;
                self.cocycle_ref(n.req("of")?)?.restrict(self.subgroup_ref(n.req("to")?)?).map_err(at(n))
            }
            "pullback" => {
                n.only_keys(&["kind", "of", "by"])?;
                let gamma = self.element(n.req("by")?)?;
                self.cocycle_ref(n.req("of")?)?.pullback(&gamma).map_err(at(n))
            }
            other => Err(n.req("kind")?.error(format!("unknown cocycle kind `{other}`"))),
        }
    }

    fn locate(&self, dom: &Domain, e: &Node) -> Result<usize> {
        let g = self.element(e)?;
        dom.locate(&g).ok_or_else(|| e.error(format!("{g} is not in {}", dom.group())))
    }

    fn field_of(&self, n: &Node) -> Result<u32> {
        n.get("field").map_or(Ok(self.meta.order), positive_u32)
    }

    fn images(&self, n: &Node, field: u32) -> Result<Vec<(GroupElement, CMat)>> {
        n.req("images")?
            .as_array()?
            .iter()
            .map(|e| {
                e.only_keys(&["g", "m"])?;
                Ok((self.element(e.req("g")?)?, matrix(e.req("m")?, field)?))
            })
            .collect()
    }

    fn projrep(&self, n: &Node) -> Result<ProjRep> {
        let common = ["kind", "obstruction"];
        let with = |extra: &[&'static str]| -> Vec<&'static str> { common.iter().chain(extra).copied().collect() };
        let rep = match kind_of(n)? {
            "generators" => {
                n.only_keys(&with(&["cocycle", "field", "images"]))?;
                let c = self.cocycle_ref(n.req("cocycle")?)?;
                ProjRep::from_generators(c, &self.images(n, self.field_of(n)?)?).map_err(at(n))?
            }
            "elements" => {
                n.only_keys(&with(&["cocycle", "group", "order", "period", "field", "images"]))?;
                let images = self.images(n, self.field_of(n)?)?;
                let (dom, cocycle) = match n.get("cocycle") {
                    Some(c) => {
                        let c = self.cocycle_ref(c)?;
                        (c.domain().clone(), Some(c))
                    }
                    None => (self.domain(n, false)?, None),
                };
                let mut mats: Vec<Option<CMat>> = vec![None; dom.len()];
                for (g, m) in images {
                    let i = dom.locate(&g).ok_or_else(|| n.error(format!("{g} is not in {}", dom.group())))?;
                    mats[i] = Some(m);
                }
                let mats = mats
                    .into_iter()
                    .enumerate()
                    .map(|(i, m)| m.ok_or_else(|| n.error(format!("no image given for {}", dom.lift(i)))))
                    .collect::<Result<Vec<_>>>()?;
                match cocycle {
                    Some(c) => ProjRep::with_cocycle(mats, c).map_err(at(n))?,
                    None => ProjRep::from_matrices(&dom, mats, self.order_of(n)?).map_err(at(n))?,
                }
            }
            "trivial" => match n.get("cocycle") {
                Some(c) => {
                    n.only_keys(&with(&["cocycle"]))?;
                    let c = self.cocycle_ref(c)?;
                    if !c.is_trivial() {
                        return Err(Error::ObstructionMismatch("the trivial representation needs a trivial cocycle".into()));
                    }
                    ProjRep::trivial(c.domain(), c.order())
                }
                None => {
                    n.only_keys(&with(&["group", "order", "period"]))?;
                    ProjRep::trivial(&self.domain(n, true)?, self.order_of(n)?)
                }
            },
            "regular" => {
                n.only_keys(&with(&["cocycle"]))?;
                ProjRep::twisted_regular(self.cocycle_ref(n.req("cocycle")?)?)
            }
            "induced" => {
                n.only_keys(&with(&["of", "cocycle"]))?;
                let pi = self.projrep_ref(n.req("of")?)?;
                pi.induce(self.cocycle_ref(n.req("cocycle")?)?).map_err(at(n))?
            }
            kind @ ("tensor" | "direct_sum") => {
                n.only_keys(&with(&["of"]))?;
                let of = n.req("of")?;
                let list = of.as_str_list()?;
                let mut acc = self.projrep_ref(list.first().ok_or_else(|| of.error("empty list"))?)?.clone();
                for r in &list[1..] {
                    let o = self.projrep_ref(r)?;
                    acc = if kind == "tensor" { acc.tensor(o) } else { acc.direct_sum(o) }.map_err(at(n))?;
                }
                acc
            }
            "restrict" => {
                n.only_keys(&with(&["of", "to"]))?;
                self.projrep_ref(n.req("of")?)?.restrict(self.subgroup_ref(n.req("to")?)?).map_err(at(n))?
            }
            "conjugate" => {
                n.only_keys(&with(&["of"]))?;
                self.projrep_ref(n.req("of")?)?.conjugate()
            }
            "pullback" => {
                n.only_keys(&with(&["of", "by"]))?;
                let gamma = self.element(n.req("by")?)?;
                self.projrep_ref(n.req("of")?)?.pullback(&gamma).map_err(at(n))?
            }
            other => return Err(n.req("kind")?.error(format!("unknown projrep kind `{other}`"))),
        };
        if let Some(r) = n.get("obstruction") {
            if !rep.cocycle().same_as(self.cocycle_ref(r)?) {
                return Err(Error::ObstructionMismatch(format!(
                    "declared obstruction `{}` differs from the computed one",
                    r.as_str()?
                )));
            }
        }
        Ok(rep)
    }

    fn object(&self, n: &Node) -> Result<HeckeObject> {
        n.only_keys(&["cocycle", "group", "witness"])?;
        let witness = n.get("witness").map(|w| self.projrep_ref(w).cloned()).transpose()?;
        match (n.get("cocycle"), n.get("group")) {
            (Some(c), None) => HeckeObject::new(self.cocycle_ref(c)?.clone(), witness).map_err(at(n)),
            (None, Some(g)) => {
                let base = HeckeObject::trivial(self.subgroup_ref(g)?).map_err(at(n))?;
                match witness {
                    None => Ok(base),
                    Some(w) => HeckeObject::new(base.cocycle().clone(), Some(w)).map_err(at(n)),
                }
            }
            _ => Err(n.error("an object needs exactly one of `cocycle` or `group`")),
        }
    }

    /// A block representation: a declared projrep, or the trivial or twisted regular
    /// representation with the obstruction the block requires.
    fn block_rep(&self, source: &HeckeObject, target: &HeckeObject, gamma: &GroupElement, r: &Node) -> Result<ProjRep> {
        let name = r.as_str()?;
        if name != "trivial" && name != "regular" {
            return self.projrep_ref(r).cloned();
        }
        let stab = coset_data(source.group(), gamma, target.group()).map_err(at(r))?.stabilizer;
        let model = refined_domain(&stab, &[source.domain().period(), target.domain().period()]).map_err(at(r))?;
        let req = required_obstruction(source, target, gamma, &model)?;
        if name == "regular" {
            return Ok(ProjRep::twisted_regular(&req));
        }
        if !req.is_trivial() {
            return Err(Error::ObstructionMismatch(format!("the block at {gamma} needs a non-trivial obstruction")));
        }
        Ok(ProjRep::trivial(&model, req.order()))
    }

    fn blocks(&self, source: &HeckeObject, target: &HeckeObject, list: &Node) -> Result<Vec<Block>> {
        list.as_array()?
            .iter()
            .map(|b| {
                b.only_keys(&["gamma", "rep"])?;
                let gamma = self.element(b.req("gamma")?)?;
                let rep = self.block_rep(source, target, &gamma, b.req("rep")?)?;
                Ok(Block::new(gamma, rep))
            })
            .collect()
    }

    fn correspondence(&self, n: &Node) -> Result<Correspondence> {
        match kind_of(n)? {
            "blocks" => {
                n.only_keys(&["kind", "source", "target", "blocks"])?;
                let source = self.object_ref(n.req("source")?)?;
                let target = self.object_ref(n.req("target")?)?;
                let blocks = self.blocks(source, target, n.req("blocks")?)?;
                Correspondence::new(source, target, blocks).map_err(at(n))
            }
            kind @ ("tensor" | "direct_sum") => {
                n.only_keys(&["kind", "of"])?;
                let of = n.req("of")?;
                let list = of.as_str_list()?;
                let mut acc = self.correspondence_ref(list.first().ok_or_else(|| of.error("empty list"))?)?.clone();
                for r in &list[1..] {
                    let o = self.correspondence_ref(r)?;
                    acc = if kind == "tensor" { crate::hecke::tensor(&acc, o) } else { acc.direct_sum(o) }.map_err(at(n))?;
                }
                Ok(acc)
            }
            "dual" => {
                n.only_keys(&["kind", "of"])?;
                self.correspondence_ref(n.req("of")?)?.dual().map_err(at(n))
            }
            "identity" => {
                n.only_keys(&["kind", "object"])?;
                Correspondence::identity(self.object_ref(n.req("object")?)?).map_err(at(n))
            }
            other => Err(n.req("kind")?.error(format!("unknown correspondence kind `{other}`"))),
        }
    }

    fn subfactor(&self, n: &Node) -> Result<SubfactorDatum> {
        n.only_keys(&["base", "cocycle", "witness", "entries"])?;
        let base = self.subgroup_ref(n.req("base")?)?.clone();
        let cocycle = self.cocycle_ref(n.req("cocycle")?)?.clone();
        let witness = n.get("witness").map(|w| self.projrep_ref(w).cloned()).transpose()?;
        if !base.is_commensurate(cocycle.group()) {
            return Err(Error::NotCommensurate);
        }
        let source = HeckeObject::trivial(&base).map_err(at(n))?;
        let target = HeckeObject::new(cocycle.clone(), witness.clone()).map_err(at(n))?;
        let mut entries = Vec::new();
        for b in self.blocks(&source, &target, n.req("entries")?)? {
            entries.push((b.gamma, b.rep));
        }
        Ok(SubfactorDatum { base, cocycle, witness, entries })
    }

    fn divisor_set(n: &Node) -> Result<DivisorClosedSet> {
        if let Some(v) = n.get("values") {
            n.only_keys(&["values"])?;
            let values = v.as_array()?.iter().map(Node::as_u64).collect::<Result<Vec<_>>>()?;
            return DivisorClosedSet::explicit(values);
        }
        n.only_keys(&["exponents"])?;
        let mut map = BTreeMap::new();
        for (k, v) in n.req("exponents")?.entries()? {
            let p: u64 = k.parse().map_err(|_| v.error(format!("exponent key `{k}` is not an integer")))?;
            let e = match &v.value {
                Value::Str(s) if s == "inf" => Exponent::Infinite,
                Value::Int(_) => Exponent::Finite(u32::try_from(v.as_u64()?).map_err(|_| v.error("exponent too large"))?),
                _ => return Err(v.error("an exponent is a non-negative integer or \"inf\"")),
            };
            map.insert(p, e);
        }
        DivisorClosedSet::exponents(map).map_err(at(n))
    }

    fn quotient(&self, n: &Node) -> Result<QuotientGroup> {
        match kind_of(n)? {
            "finite" => {
                if let Some(g) = n.get("group") {
                    n.only_keys(&["kind", "group"])?;
                    let g = self.subgroup_ref(g)?;
                    if !g.is_finite() {
                        return Err(n.error("a finite quotient needs a finite group"));
                    }
                    return Ok(QuotientGroup::Finite(g.clone()));
                }
                n.only_keys(&["kind", "degree", "generators"])?;
                let degree = n.req("degree")?.as_u64()? as usize;
                let gens = perm_list(n.req("generators")?, degree)?;
                let amb = AmbientGroup::permutation(degree, gens).map_err(at(n))?;
                Ok(QuotientGroup::Finite(amb.whole().map_err(at(n))?))
            }
            "profinite" => {
                n.only_keys(&["kind", "primes"])?;
                let primes = n.req("primes")?;
                let list = primes.as_array()?.iter().map(Node::as_u64).collect::<Result<Vec<_>>>()?;
                if let Some(p) = list.iter().find(|&&p| !crate::galois::is_prime(p)) {
                    return Err(primes.error(format!("{p} is not prime")));
                }
                Ok(QuotientGroup::Profinite(list))
            }
            other => Err(n.req("kind")?.error(format!("unknown quotient kind `{other}`"))),
        }
    }
}

fn positive_u32(n: &Node) -> Result<u32> {
    u32::try_from(n.as_u64()?).ok().filter(|&v| v > 0).ok_or_else(|| n.error("expected a positive 32-bit integer"))
}

fn perm_list(n: &Node, degree: usize) -> Result<Vec<Perm>> {
    n.as_array()?.iter().map(|g| Perm::parse_cycles(g.as_str()?, degree).map_err(at(g))).collect()
}

/// A rational vector, written `"[1, 1/2]"` or as an array of numbers and strings.
fn vector(n: &Node, rank: usize) -> Result<Vec<crate::groups::Rat>> {
    let parts: Vec<String> = match &n.value {
        Value::Array(a) => a.iter().map(Node::as_text).collect::<Result<_>>()?,
        Value::Str(s) => {
            let t = s.trim();
            if t == "e" || t == "0" {
                vec!["0".to_string(); rank]
            } else {
                let inner = t
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .or_else(|| t.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
                    .unwrap_or(t);
                inner.split(',').map(|x| x.trim().to_string()).collect()
            }
        }
        _ => return Err(n.error("expected a vector")),
    };
    if parts.len() != rank {
        return Err(n.error(format!("expected {rank} coordinates, found {}", parts.len())));
    }
    parts.iter().map(|p| parse_rat(p).map_err(at(n))).collect()
}

fn matrix(n: &Node, field: u32) -> Result<CMat> {
    let rows = n.as_array()?;
    let parsed: Vec<Vec<Cyclotomic>> = rows
        .iter()
        .map(|row| {
            row.as_array()?
                .iter()
                .map(|x| Cyclotomic::parse(&x.as_text()?, field).map_err(at(x)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let m = CMat::from_rows(parsed).map_err(at(n))?;
    if !m.is_square() {
        return Err(n.error("representation matrices must be square"));
    }
    Ok(m)
}
