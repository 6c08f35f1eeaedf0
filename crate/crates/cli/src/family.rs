use anyhow::{anyhow, bail, Context, Result};
use pebble_constructions::{
    binary_tree, centipede, chain, christmas_tree, modified_pyramid, mold, path, product_reversible, product_standard,
    pyramid, qbf_reduction, road, teabag, turnpike, GadgetHandle,
};
use pebble_engine::{Flavor, Move, PebblingTrace, TraceProgram};
use pebble_qbf::{parse_qdimacs, Qbf};
use pebble_strategies as strat;

/// A family name with its numeric parameters, written `name:a,b` when it
/// appears as a factor of a composite family.
#[derive(Clone, Debug)]
pub struct Spec {
    pub name: String,
    pub args: Vec<usize>,
}

impl Spec {
    pub fn parse(s: &str) -> Result<Spec> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let args = rest
            .split(',')
            .filter(|a| !a.is_empty())
            .map(|a| a.parse().with_context(|| format!("bad parameter `{a}` in `{s}`")))
            .collect::<Result<_>>()?;
        Ok(Spec { name: name.to_string(), args })
    }

    fn from_params(name: &str, params: &[String]) -> Result<Spec> {
        let args = params.iter().map(|a| a.parse().with_context(|| format!("bad parameter `{a}`"))).collect::<Result<_>>()?;
        Ok(Spec { name: name.to_string(), args })
    }

    fn want(&self, k: usize) -> Result<&[usize]> {
        if self.args.len() != k {
            bail!("family `{}` takes {k} parameter(s), got {}", self.name, self.args.len());
        }
        Ok(&self.args)
    }

    /// Graph of a simple (non-composite) family.
    pub fn graph(&self) -> Result<GadgetHandle> {
        Ok(match self.name.as_str() {
            "path" => path(self.want(1)?[0]),
            "chain" => {
                let a = self.want(2)?;
                chain(a[0], a[1])?
            }
            "road" => {
                let a = self.want(2)?;
                road(a[0], a[1])?
            }
            "pyramid" => pyramid(self.want(1)?[0]),
            "tree" => binary_tree(self.want(1)?[0]),
            "teabag" => {
                let a = self.want(2)?;
                teabag(a[0], a[1])
            }
            "gpyr" => modified_pyramid(self.want(1)?[0])?,
            "xmas" => christmas_tree(self.want(1)?[0])?,
            "turnpike" => turnpike(self.want(1)?[0])?,
            "centipede" => centipede(self.want(1)?[0]),
            other => bail!("unknown graph family `{other}`"),
        })
    }

    /// Reversible persistent strategy for a simple family.
    pub fn reversible(&self) -> Result<TraceProgram> {
        Ok(match self.name.as_str() {
            "path" => TraceProgram::from_trace(&strat::strat_path_reversible(self.want(1)?[0])),
            "pyramid" => strat::strat_pyramid_reversible(self.want(1)?[0])?,
            "tree" => strat::strat_tree_reversible(self.want(1)?[0])?,
            "teabag" => {
                let a = self.want(2)?;
                strat::strat_teabag(a[0], a[1])?
            }
            "gpyr" => strat::strat_modified(self.want(1)?[0])?,
            "xmas" => strat::strat_christmas(self.want(1)?[0])?,
            other => bail!("no reversible strategy for family `{other}`"),
        })
    }

    /// Standard persistent strategy for a simple family.
    pub fn standard(&self) -> Result<PebblingTrace> {
        Ok(match self.name.as_str() {
            "pyramid" => strat::strat_pyramid_standard(self.want(1)?[0]),
            "path" => {
                let l = self.want(1)?[0];
                let mut moves = Vec::new();
                for v in 0..=l {
                    moves.push(Move::place(v));
                    if v > 0 {
                        moves.push(Move::remove(v - 1));
                    }
                }
                PebblingTrace::new(Flavor::Standard, moves)
            }
            other => bail!("no standard strategy for family `{other}`"),
        })
    }
}

fn read_qbf(file: &str) -> Result<Qbf> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
    parse_qdimacs(&text).map_err(|e| anyhow!("{file}: {e}"))
}

fn factors(params: &[String]) -> Result<(Spec, Spec)> {
    match params {
        [a, b] => Ok((Spec::parse(a)?, Spec::parse(b)?)),
        _ => bail!("products take two factor specs such as `pyramid:1 path:2`"),
    }
}

/// Graph for `gen <family> <params...>`.
pub fn generate(family: &str, params: &[String]) -> Result<GadgetHandle> {
    match family {
        "mold" => match params {
            [inner] => Ok(mold(&Spec::parse(inner)?.graph()?)?),
            _ => bail!("mold takes one inner spec such as `xmas:3`"),
        },
        "product-rev" => {
            let (a, b) = factors(params)?;
            Ok(product_reversible(&a.graph()?, &b.graph()?)?)
        }
        "product-std" => {
            let (a, b) = factors(params)?;
            Ok(product_standard(&a.graph()?, &b.graph()?, None)?.gadget)
        }
        "qbf" => match params {
            [file] => Ok(qbf_reduction(&read_qbf(file)?)?.gadget),
            _ => bail!("qbf takes one QDIMACS file"),
        },
        _ => Spec::from_params(family, params)?.graph(),
    }
}

/// A strategy together with the graph it pebbles.
pub enum Emitted {
    Flat(PebblingTrace),
    Program(TraceProgram),
}

/// Strategy and graph for `strategy <family> <params...>`.
pub fn strategy(family: &str, params: &[String]) -> Result<(GadgetHandle, Emitted)> {
    Ok(match family {
        "pyramid-std" => {
            let s = Spec::from_params("pyramid", params)?;
            (s.graph()?, Emitted::Flat(s.standard()?))
        }
        "path-std" => {
            let s = Spec::from_params("path", params)?;
            (s.graph()?, Emitted::Flat(s.standard()?))
        }
        "turnpike" => {
            let s = Spec::from_params("turnpike", params)?;
            (s.graph()?, Emitted::Program(strat::strat_turnpike(s.want(1)?[0])?))
        }
        "mold" => match params {
            [inner] => {
                let s = Spec::parse(inner)?;
                let g = s.graph()?;
                let prog = strat::strat_mold(&g, &s.reversible()?)?;
                (mold(&g)?, Emitted::Program(prog))
            }
            _ => bail!("mold takes one inner spec such as `xmas:3`"),
        },
        "product-rev" => {
            let (a, b) = factors(params)?;
            let (g1, g2) = (a.graph()?, b.graph()?);
            let prog = strat::strat_product_reversible(&g1, &a.reversible()?, &g2, &b.reversible()?)?;
            (product_reversible(&g1, &g2)?, Emitted::Program(prog))
        }
        "product-std" => {
            let (a, b) = factors(params)?;
            let (g1, g2) = (a.graph()?, b.graph()?);
            let t = strat::strat_product_standard(&g1, &a.standard()?, &g2, &b.standard()?)?;
            (product_standard(&g1, &g2, None)?.gadget, Emitted::Flat(t))
        }
        "qbf" => match params {
            [file] => {
                let s = strat::strat_qbf(&read_qbf(file)?)?;
                (s.reduction.gadget, Emitted::Program(s.program))
            }
            _ => bail!("qbf takes one QDIMACS file"),
        },
        _ => {
            let s = Spec::from_params(family, params)?;
            (s.graph()?, Emitted::Program(s.reversible()?))
        }
    })
}
