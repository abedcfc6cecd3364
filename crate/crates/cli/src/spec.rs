//! Declarative run specifications: one JSON document per analysis run.

use pfg_core::group::default_trunc;
use pfg_core::{Ctx, EllipticCoefficients, FormalGroupLaw, PrimeConfig, PrimeContext};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub p: u64,
    #[serde(default = "default_residue_degree")]
    pub residue_degree: u32,
    pub precision: u32,
    /// Truncation degree; defaults to p^h_max + p + 2 for the group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc_degree: Option<u32>,
    pub group: GroupSpec,
    pub analyses: Vec<Analysis>,
}

fn default_residue_degree() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Multiplicative,
    Additive,
    LubinTate { height: u32 },
    Elliptic { a: [i64; 5] },
    EllipticShort { a4: i64, a6: i64 },
    Product { children: Vec<GroupSpec> },
}

impl GroupSpec {
    /// The largest height this run must resolve, for the default truncation.
    pub fn max_height(&self) -> u32 {
        match self {
            GroupSpec::Multiplicative | GroupSpec::Additive => 1,
            GroupSpec::LubinTate { height } => *height,
            GroupSpec::Elliptic { .. } | GroupSpec::EllipticShort { .. } => 2,
            GroupSpec::Product { children } => {
                children.iter().map(|c| c.max_height()).max().unwrap_or(1)
            }
        }
    }

    pub fn build(&self, ctx: &Ctx, trunc: u32) -> pfg_core::Result<FormalGroupLaw> {
        match self {
            GroupSpec::Multiplicative => FormalGroupLaw::multiplicative(ctx, trunc),
            GroupSpec::Additive => FormalGroupLaw::additive(ctx, trunc),
            GroupSpec::LubinTate { height } => FormalGroupLaw::lubin_tate(ctx, trunc, *height),
            GroupSpec::Elliptic { a } => {
                FormalGroupLaw::elliptic(ctx, trunc, &EllipticCoefficients::from_integers(ctx, *a))
            }
            GroupSpec::EllipticShort { a4, a6 } => {
                FormalGroupLaw::elliptic(ctx, trunc, &EllipticCoefficients::short(ctx, *a4, *a6))
            }
            GroupSpec::Product { children } => {
                let built = children
                    .iter()
                    .map(|c| c.build(ctx, trunc))
                    .collect::<pfg_core::Result<Vec<_>>>()?;
                FormalGroupLaw::product(&built)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    All,
    Axioms,
    Mulp,
    Strict,
    Torsion,
    Delta,
}

impl RunSpec {
    pub fn parse(text: &str) -> anyhow::Result<RunSpec> {
        let spec: RunSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        PrimeConfig::new(self.p, self.residue_degree, self.precision)
            .map_err(|e| anyhow::anyhow!("invalid prime configuration: {e}"))?;
        if self.analyses.is_empty() {
            // an empty analysis list is allowed: the report echoes the spec
            return Ok(());
        }
        let needed = self.p.pow(self.group.max_height()) as u32;
        let trunc = self.effective_trunc();
        let wants_forms = self.requested().iter().any(|a| {
            matches!(a, Analysis::Mulp | Analysis::Strict | Analysis::Torsion | Analysis::Delta)
        });
        if wants_forms && trunc < needed {
            anyhow::bail!(
                "truncation degree {trunc} cannot resolve forms of degree {needed}; \
                 raise trunc_degree or drop the strictness/torsion analyses"
            );
        }
        Ok(())
    }

    pub fn effective_trunc(&self) -> u32 {
        self.trunc_degree
            .unwrap_or_else(|| default_trunc(self.p, self.group.max_height()))
    }

    /// The concrete analysis list with `all` expanded, in dependency order.
    pub fn requested(&self) -> Vec<Analysis> {
        let all = [
            Analysis::Axioms,
            Analysis::Mulp,
            Analysis::Strict,
            Analysis::Torsion,
            Analysis::Delta,
        ];
        if self.analyses.contains(&Analysis::All) {
            return all.to_vec();
        }
        all.iter()
            .filter(|a| self.analyses.contains(a))
            .copied()
            .collect()
    }

    pub fn context(&self) -> pfg_core::Result<Ctx> {
        PrimeContext::new(PrimeConfig::new(self.p, self.residue_degree, self.precision)?)
    }
}
