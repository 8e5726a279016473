//! Turning input files into a family, a context and an abstraction.

use std::fs;
use std::path::Path;

use confluence::text::{parse_abstraction, parse_context, parse_graph, parse_patterns, Vocabulary};
use confluence::{
    ConnectedEdgeFamily, ConnectedVertexFamily, ExplicitFamily, ExtensionalAbstraction, Family,
    KGapFamily, ObjectContext, Pattern,
};

use crate::{CliError, FamilyArgs, SupportArgs};

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

/// Either an implicit family with a fixed item vocabulary, or an explicit
/// pattern list whose universe grows with the context.
enum Source {
    Fixed(Box<dyn Family>),
    Listed(Vec<Pattern>),
}

pub struct Instance {
    pub family: Box<dyn Family>,
    pub items: Vocabulary,
    pub objects: Vec<String>,
    pub context: ObjectContext,
    pub abstraction: ExtensionalAbstraction,
}

fn family_source(args: &FamilyArgs) -> Result<(Source, Vocabulary), CliError> {
    if let Some(path) = &args.graph {
        let g = parse_graph(&read(path)?).map_err(|e| parse_err(path, e))?;
        if args.edge_mode {
            let fam = ConnectedEdgeFamily::new(&g).map_err(|e| CliError::Invalid(e.to_string()))?;
            let items = Vocabulary::from_names(g.edge_names().iter().cloned());
            return Ok((Source::Fixed(Box::new(fam)), items));
        }
        let fam = ConnectedVertexFamily::new(&g, args.min_size)
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        let items = Vocabulary::from_names(g.vertex_names().iter().cloned());
        return Ok((Source::Fixed(Box::new(fam)), items));
    }
    if let Some(path) = &args.explicit {
        let mut items = Vocabulary::new();
        let patterns = parse_patterns(&read(path)?, &mut items).map_err(|e| parse_err(path, e))?;
        return Ok((Source::Listed(patterns), items));
    }
    if let Some(arg) = &args.kgap {
        let (n, k) = arg
            .split_once(',')
            .and_then(|(n, k)| {
                Some((
                    n.trim().parse::<usize>().ok()?,
                    k.trim().parse::<usize>().ok()?,
                ))
            })
            .ok_or_else(|| CliError::Input(format!("--kgap expects `n,k`, got `{arg}`")))?;
        let fam = KGapFamily::new(n, k).map_err(|e| CliError::Invalid(e.to_string()))?;
        let items = Vocabulary::from_names((1..=n).map(|i| i.to_string()));
        return Ok((Source::Fixed(Box::new(fam)), items));
    }
    Err(CliError::Input("no family given".into()))
}

fn explicit(
    patterns: Vec<Pattern>,
    universe: usize,
    items: &Vocabulary,
) -> Result<ExplicitFamily, CliError> {
    ExplicitFamily::new(patterns, universe).map_err(|e| match e {
        confluence::setsys::SetsysError::NotSubconfluence { t, x, y } => CliError::Invalid(format!(
            "not a subconfluence: witness ({}, {}, {}): both contain the first, their union is missing",
            items.format(&t),
            items.format(&x),
            items.format(&y)
        )),
        other => CliError::Invalid(other.to_string()),
    })
}

/// The family alone, for `check`.
pub fn family(args: &FamilyArgs) -> Result<(Box<dyn Family>, Vocabulary), CliError> {
    let (source, items) = family_source(args)?;
    match source {
        Source::Fixed(f) => Ok((f, items)),
        Source::Listed(p) => Ok((Box::new(explicit(p, items.len(), &items)?), items)),
    }
}

pub fn instance(
    args: &FamilyArgs,
    context: &Path,
    support: &SupportArgs,
) -> Result<Instance, CliError> {
    let (source, mut items) = family_source(args)?;
    let fixed = items.len();
    let (objects, descriptions) =
        parse_context(&read(context)?, &mut items).map_err(|e| parse_err(context, e))?;
    let family: Box<dyn Family> = match source {
        Source::Fixed(f) => {
            if items.len() > fixed {
                return Err(CliError::Invalid(format!(
                    "context mentions item `{}` that is not in the family",
                    items.name(fixed)
                )));
            }
            f
        }
        Source::Listed(p) => Box::new(explicit(p, items.len(), &items)?),
    };
    let ctx = ObjectContext::new(items.len(), descriptions)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let abstraction = if let Some(path) = &support.abstraction {
        let gens = parse_abstraction(&read(path)?, &objects).map_err(|e| parse_err(path, e))?;
        ExtensionalAbstraction::generators(objects.len(), gens)
            .map_err(|e| CliError::Invalid(e.to_string()))?
    } else if let Some(s) = support.min_support {
        ExtensionalAbstraction::MinSupport(s)
    } else {
        ExtensionalAbstraction::Identity
    };
    Ok(Instance {
        family,
        items,
        objects,
        context: ctx,
        abstraction,
    })
}
