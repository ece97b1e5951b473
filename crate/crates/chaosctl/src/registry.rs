//! Named models: the built-in LPA and delayed Ricker maps plus plugins.

use std::collections::BTreeMap;

use chaosctl_core::models::{ricker_lift, Lpa};
use chaosctl_core::{DomainSpec, FnMap, MapModel, Matrix};

use crate::config::ModelSpec;
use crate::error::{CliError, CliResult, Context};

pub type DynModel = Box<dyn MapModel + Send + Sync>;

/// Builds a model from its numeric `plugin.*` parameters.
pub type PluginCtor = fn(&BTreeMap<String, f64>) -> CliResult<DynModel>;

#[derive(Clone)]
pub struct Registry {
    plugins: BTreeMap<String, PluginCtor>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Self {
            plugins: BTreeMap::new(),
        };
        r.register("logistic", logistic);
        r
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            plugins: BTreeMap::new(),
        }
    }

    /// Adds or replaces a plugin. `lpa` and `ricker` are reserved.
    pub fn register(&mut self, name: &str, ctor: PluginCtor) {
        self.plugins.insert(name.to_string(), ctor);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        ["lpa", "ricker"]
            .into_iter()
            .chain(self.plugins.keys().map(String::as_str))
    }

    pub fn build(&self, spec: &ModelSpec) -> CliResult<DynModel> {
        match spec.name.as_str() {
            "lpa" => Ok(Box::new(Lpa::new(spec.lpa).field("lpa")?)),
            "ricker" => Ok(Box::new(ricker_lift(spec.ricker).field("ricker")?)),
            name => match self.plugins.get(name) {
                Some(ctor) => ctor(&spec.plugin),
                None => Err(CliError::config(
                    "model",
                    format!(
                        "unknown model '{name}' (known: {})",
                        self.names().collect::<Vec<_>>().join(", ")
                    ),
                )),
            },
        }
    }
}

/// `x ↦ r·x·(1 − x)` on `[0, 1]`; `plugin.r` defaults to 3.9.
fn logistic(params: &BTreeMap<String, f64>) -> CliResult<DynModel> {
    if let Some(k) = params.keys().find(|k| k.as_str() != "r") {
        return Err(CliError::config(
            format!("plugin.{k}"),
            "the logistic model only takes plugin.r",
        ));
    }
    let r = params.get("r").copied().unwrap_or(3.9);
    if !(0.0..=4.0).contains(&r) {
        return Err(CliError::config(
            "plugin.r",
            "must lie in [0, 4] to map [0, 1] into itself",
        ));
    }
    let domain = DomainSpec::boxed(vec![0.0], vec![1.0]).field("plugin")?;
    let map = FnMap::new(domain, move |x, out| out[0] = r * x[0] * (1.0 - x[0]))
        .with_jacobian(move |x| Matrix::from_element(1, 1, r * (1.0 - 2.0 * x[0])));
    Ok(Box::new(map))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_builtins_and_plugins() {
        let reg = Registry::default();
        let mut spec = ModelSpec::default();
        assert_eq!(reg.build(&spec).unwrap().dim(), 3);
        spec.name = "ricker".into();
        spec.ricker.delay = 4;
        assert_eq!(reg.build(&spec).unwrap().dim(), 4);
        spec.name = "logistic".into();
        assert_eq!(reg.build(&spec).unwrap().dim(), 1);
        spec.name = "henon".into();
        let err = reg.build(&spec).err().unwrap();
        assert!(err.to_string().starts_with("model:"), "{err}");
    }

    #[test]
    fn plugin_parameters_are_checked() {
        let reg = Registry::default();
        let mut spec = ModelSpec {
            name: "logistic".into(),
            ..ModelSpec::default()
        };
        spec.plugin.insert("r".into(), 5.0);
        assert!(reg
            .build(&spec)
            .err()
            .unwrap()
            .to_string()
            .starts_with("plugin.r:"));
    }
}
