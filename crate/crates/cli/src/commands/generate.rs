use anyhow::Result;
use qanneal_core::{random_graph, random_local_cost};
use serde::Serialize;

use crate::args::{Common, GenerateCommand};
use crate::instance::Instance;
use crate::output::{write_json, Header};

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum GeneratorConfig<'a> {
    Graph(&'a crate::args::GraphArgs),
    Cost(&'a crate::args::CostArgs),
}

#[derive(Serialize)]
struct GeneratedFile<'a> {
    generator: Header<'a, GeneratorConfig<'a>>,
    instance: Instance,
}

pub fn run(common: &Common, cmd: &GenerateCommand) -> Result<()> {
    let (config, instance) = match cmd {
        GenerateCommand::Graph(a) => {
            let graph = random_graph(a.v, a.p, common.seed)?
                .with_penalty(a.lambda)?
                .with_coupling(a.coupling)?;
            (GeneratorConfig::Graph(a), Instance::Graph(graph))
        }
        GenerateCommand::Cost(a) => {
            let cost = random_local_cost(a.n, a.m, a.density, common.seed)?;
            (GeneratorConfig::Cost(a), Instance::Cost(cost))
        }
    };
    let file = GeneratedFile {
        generator: Header::new("generate", common.seed, &config, common.no_timestamp),
        instance,
    };
    write_json(common.out.as_deref(), &file)
}
