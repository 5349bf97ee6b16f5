//! Loading an input file and picking blocks out of it by name.

use std::sync::Arc;

use lawvere_core::cat_model::CatModel;
use lawvere_core::dsl::{self, Library, SigmaEntry};
use lawvere_core::two_cells::TwoTheory;
use sha2::{Digest, Sha256};

use crate::report::{Input as InputDigest, Report};
use crate::Input;

pub struct Context {
    pub args: Input,
    pub lib: Library,
    pub input: InputDigest,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl Context {
    pub fn load(args: &Input) -> Result<Context, String> {
        let path = &args.file;
        let bytes = std::fs::read(path).map_err(|e| format!("{}: cannot read file: {e}", path.display()))?;
        let doc = dsl::load(path).map_err(|d| d.to_string())?;
        let lib = dsl::resolve(&doc).map_err(|d| {
            let mut d = d;
            if d.path.is_none() {
                d.path = Some(path.display().to_string());
            }
            d.to_string()
        })?;
        let canonical = dsl::serialize(&doc);
        Ok(Context {
            args: args.clone(),
            lib,
            input: InputDigest {
                path: path.display().to_string(),
                sha256: hex(&Sha256::digest(&bytes)),
                document_sha256: hex(&Sha256::digest(canonical.as_bytes())),
            },
        })
    }

    pub fn theory(&self, report: &mut Report) -> Result<(String, Arc<TwoTheory>), String> {
        let name = match (&self.args.theory, &self.args.sigma) {
            (Some(t), _) => t.clone(),
            (None, Some(_)) => self.sigma(report)?.1.theory.clone(),
            (None, None) => self
                .lib
                .theories
                .keys()
                .next()
                .cloned()
                .ok_or("the file declares no theory")?,
        };
        let t = self
            .lib
            .theories
            .get(&name)
            .cloned()
            .ok_or_else(|| format!("unknown theory {name}"))?;
        report.select("theory", &name);
        Ok((name, t))
    }

    /// The table named by `--sigma`, else the first one for `--theory`, else
    /// the first one in the file.
    pub fn sigma(&self, report: &mut Report) -> Result<(String, SigmaEntry), String> {
        let found = match (&self.args.sigma, &self.args.theory) {
            (Some(s), _) => self
                .lib
                .sigmas
                .get(s)
                .map(|e| (s.clone(), e.clone()))
                .ok_or_else(|| format!("unknown table {s}"))?,
            (None, Some(t)) => self
                .lib
                .sigmas
                .iter()
                .find(|(_, e)| &e.theory == t)
                .map(|(n, e)| (n.clone(), e.clone()))
                .ok_or_else(|| format!("no commutativity table for {t}"))?,
            (None, None) => self
                .lib
                .sigmas
                .iter()
                .next()
                .map(|(n, e)| (n.clone(), e.clone()))
                .ok_or("the file declares no commutativity table")?,
        };
        report.select("sigma", &found.0);
        Ok(found)
    }

    pub fn cat_model(&self, name: &str) -> Result<&CatModel, String> {
        self.lib
            .cat_models
            .get(name)
            .ok_or_else(|| format!("unknown category model {name}"))
    }

    /// The model named by `flag`, else by `--model`, else the first category
    /// model of the selected theory.
    pub fn model(&self, report: &mut Report, key: &str, flag: Option<&str>) -> Result<&CatModel, String> {
        let name = match flag.or(self.args.model.as_deref()) {
            Some(n) => n.to_string(),
            None => {
                let theory = match &self.args.theory {
                    Some(t) => Some(t.clone()),
                    None if self.args.sigma.is_some() => Some(self.sigma(&mut Report::new(""))?.1.target),
                    None => None,
                };
                self.lib
                    .cat_models
                    .iter()
                    .find(|(_, m)| theory.as_deref().is_none_or(|t| m.theory.name() == t))
                    .map(|(n, _)| n.clone())
                    .ok_or("the file declares no category model")?
            }
        };
        report.select(key, &name);
        self.cat_model(&name)
    }

    /// Models from `--probes`, else every category model over `theory`.
    pub fn probes(&self, report: &mut Report, theory: &str) -> Result<Vec<CatModel>, String> {
        let names: Vec<String> = match &self.args.probes {
            Some(p) => self
                .lib
                .probes
                .get(p)
                .cloned()
                .ok_or_else(|| format!("unknown probe list {p}"))?,
            None => self
                .lib
                .cat_models
                .iter()
                .filter(|(_, m)| m.theory.name() == theory)
                .map(|(n, _)| n.clone())
                .collect(),
        };
        report.select("probes", names.join(","));
        names
            .iter()
            .map(|n| self.cat_model(n).cloned())
            .collect()
    }
}
