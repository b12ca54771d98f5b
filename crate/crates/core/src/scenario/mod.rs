//! Declarative scenario files.
//!
//! A scenario is a TOML document with `format = 1`, optional `[meta]` and
//! `[ambient]` sections, named declarations (`[subgroups.NAME]`, `[cocycles.NAME]`,
//! `[projreps.NAME]`, `[objects.NAME]`, `[correspondences.NAME]`,
//! `[subfactors.NAME]`, `[divisor_sets.NAME]`, `[quotients.NAME]`) and a `[run]`
//! table holding command parameters. Sections are built in that order, and
//! within a section in document order, so every name must be declared before use.

pub mod build;
pub mod cache;
pub mod node;
pub mod report;
pub mod run;

pub use build::{Meta, Model, Registry};
pub use cache::{cache_key, Cache, Entry};
pub use node::{parse_document, Node, Pos, Value};
pub use report::{error_record, Report};
pub use run::{run, RunOptions, COMMANDS};

use crate::error::Result;

#[derive(Clone, Debug)]
pub struct Scenario {
    doc: Node,
    model: Model,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario> {
        let doc = parse_document(text)?;
        let model = Model::build(&doc)?;
        Ok(Scenario { doc, model })
    }

    pub fn doc(&self) -> &Node {
        &self.doc
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// Canonical text: comments and layout dropped, document order kept.
    pub fn serialize(&self) -> String {
        let toml::Value::Table(t) = self.doc.to_toml() else { unreachable!("documents are tables") };
        toml::to_string(&t).expect("scenario documents serialize")
    }

    /// `command` from `[run]`, if given.
    pub fn command(&self) -> Option<&str> {
        self.model.run.as_ref()?.get("command")?.as_str().ok()
    }

    pub fn run(&self, command: &str, opts: &RunOptions) -> Result<Report> {
        run(&self.model, command, opts)
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    Scenario::parse(text)
}
