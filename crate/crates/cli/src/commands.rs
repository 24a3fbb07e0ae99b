use crate::{CliError, Command, GraphArgs};
use anyhow::{anyhow, Context};
use rsw_core::hierarchy::{marker_cut, saliency_for_pairs, MergeTree};
use rsw_core::io::{self, DensityConfig};
use rsw_core::partition::adjacent_pairs;
use rsw_core::{
    ingest_prior, simulate_sws, reweight, Dissimilarity, FineGraph, GraphOptions, LabelMap,
    MarkerDensityModel, MinimumSpanningTree, NodeLabeling, ProbabilityMap,
};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Everything needed to run one graph-based command.
#[derive(Debug)]
struct PipelineConfig {
    image: PathBuf,
    fine_partition: Option<PathBuf>,
    options: GraphOptions,
    models: Vec<DensityConfig>,
    chain_length: usize,
}

impl PipelineConfig {
    fn new(args: GraphArgs, model_paths: &[PathBuf], chain_length: usize) -> Result<Self, CliError> {
        let dissimilarity: Dissimilarity = args
            .dissimilarity
            .parse()
            .map_err(|e: rsw_core::Error| CliError::Usage(e.to_string()))?;
        if chain_length == 0 {
            return Err(CliError::Usage("chain length must be at least 1".into()));
        }
        let models = model_paths
            .iter()
            .map(|p| DensityConfig::load(p).with_context(|| format!("reading model {}", p.display())))
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(Self {
            image: args.image,
            fine_partition: args.fine_partition,
            options: GraphOptions {
                dissimilarity,
                quantization: args.quantization,
            },
            models,
            chain_length,
        })
    }

    /// The prior feeding region stats, shared by every stage that needs one.
    fn stats_prior(&self) -> anyhow::Result<Option<&Path>> {
        let mut found: Option<&Path> = None;
        for p in self.models.iter().filter_map(DensityConfig::stats_prior) {
            match found {
                Some(existing) if existing != p => {
                    return Err(anyhow!("transition stages must share one prior"));
                }
                _ => found = Some(p),
            }
        }
        Ok(found)
    }

    fn load(&self) -> anyhow::Result<(FineGraph, Vec<MarkerDensityModel>)> {
        let image = io::read_image(&self.image)
            .with_context(|| format!("reading image {}", self.image.display()))?;
        let dims = image.dims();
        let load_prior = |p: &Path| -> anyhow::Result<ProbabilityMap> {
            let raster = io::read_image(p).with_context(|| format!("reading prior {}", p.display()))?;
            Ok(ingest_prior(&raster, dims))
        };
        let partition = self
            .fine_partition
            .as_ref()
            .map(|p| io::read_labelmap(p).with_context(|| format!("reading {}", p.display())))
            .transpose()?;
        let stats_prior = self.stats_prior()?.map(load_prior).transpose()?;
        let fine = FineGraph::build(&image, partition, stats_prior.as_ref(), self.options)?;
        let mut models = Vec::new();
        for _ in 0..self.chain_length {
            for cfg in &self.models {
                let priors = cfg
                    .priors
                    .iter()
                    .map(|p| load_prior(p))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                models.push(cfg.to_model(priors)?);
            }
        }
        Ok((fine, models))
    }
}

fn write_weights_csv(tree: &MinimumSpanningTree, path: &Path) -> anyhow::Result<()> {
    let mut out = String::from("edge,source,target,weight\n");
    for e in tree.edges() {
        writeln!(out, "{},{},{},{}", e.id, e.source, e.target, e.weight)?;
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_tree_outputs(fine: &FineGraph, tree: &MinimumSpanningTree, out_dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(out_dir)?;
    io::write_labelmap(&fine.partition, out_dir.join("fine.pgm"))?;
    io::write_hierarchy(&FineGraph::hierarchy(tree), out_dir.join("hierarchy.json"))?;
    write_weights_csv(tree, &out_dir.join("weights.csv"))
}

fn load_hierarchy(hierarchy: &Path, fine: &Path) -> anyhow::Result<(MergeTree, LabelMap)> {
    let tree = io::read_hierarchy(hierarchy).with_context(|| format!("reading {}", hierarchy.display()))?;
    let fine = io::read_labelmap(fine).with_context(|| format!("reading {}", fine.display()))?;
    if tree.num_leaves() != fine.num_labels() {
        return Err(anyhow!(
            "hierarchy has {} leaves but the fine partition has {} regions",
            tree.num_leaves(),
            fine.num_labels()
        ));
    }
    Ok((tree, fine))
}

fn write_segmentation(fine: &LabelMap, labels: &NodeLabeling, out: &Path) -> anyhow::Result<()> {
    io::write_labelmap(&fine.coarsen(labels)?, out)?;
    Ok(())
}

fn parse_points(text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("--at expects x,y,... integers, got `{text}`")))?;
    if values.is_empty() || values.len() % 2 != 0 {
        return Err(CliError::Usage("--at expects an even number of coordinates".into()));
    }
    Ok(values.chunks_exact(2).map(|c| (c[0], c[1])).collect())
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Build { graph, out_dir } => {
            let cfg = PipelineConfig::new(graph, &[], 1)?;
            let (fine, _) = cfg.load()?;
            write_tree_outputs(&fine, &fine.mst, &out_dir)?;
        }
        Command::Reweight { graph, model, out_dir } => {
            let cfg = PipelineConfig::new(graph, &[model], 1)?;
            let (fine, models) = cfg.load()?;
            let tree = fine.reweight(&models)?;
            write_tree_outputs(&fine, tree.tree(), &out_dir)?;
        }
        Command::Chain {
            graph,
            model,
            length,
            out_dir,
        } => {
            let cfg = PipelineConfig::new(graph, &model, length)?;
            let (fine, models) = cfg.load()?;
            let tree = fine.reweight(&models)?;
            write_tree_outputs(&fine, tree.tree(), &out_dir)?;
        }
        Command::Cut {
            hierarchy,
            fine_partition,
            k,
            lambda,
            out,
        } => {
            let (tree, fine) = load_hierarchy(&hierarchy, &fine_partition)?;
            let labels = match (k, lambda) {
                (Some(k), _) => tree.k_cut(k)?,
                (None, Some(l)) => tree.threshold_cut(l),
                (None, None) => return Err(CliError::Usage("one of --k or --lambda is required".into())),
            };
            write_segmentation(&fine, &labels, &out)?;
        }
        Command::Markers {
            hierarchy,
            fine_partition,
            at,
            out,
        } => {
            let points = parse_points(&at)?;
            let (tree, fine) = load_hierarchy(&hierarchy, &fine_partition)?;
            let (w, h) = fine.dims();
            let markers = points
                .iter()
                .map(|&(x, y)| {
                    if x < w && y < h {
                        Ok(fine.get(x, y))
                    } else {
                        Err(anyhow!("marker ({x}, {y}) lies outside the {w}x{h} image"))
                    }
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let seg = marker_cut(&tree.to_spanning_tree()?, &markers)?;
            write_segmentation(&fine, &seg.labeling(), &out)?;
        }
        Command::Ucm {
            hierarchy,
            fine_partition,
            out,
            display,
        } => {
            let (tree, fine) = load_hierarchy(&hierarchy, &fine_partition)?;
            let sal = saliency_for_pairs(&tree, &adjacent_pairs(&fine))?;
            let ucm = rsw_core::render_ucm(&sal, &fine)?;
            io::write_ucm(&ucm, &out)?;
            if let Some(d) = display {
                io::write_ucm_display(&ucm, d)?;
            }
        }
        Command::Simulate {
            graph,
            model,
            trials,
            seed,
            out,
        } => {
            if trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let cfg = PipelineConfig::new(graph, &[model], 1)?;
            let (fine, models) = cfg.load()?;
            let density = fine.resolve(&models[0])?;
            let closed = reweight(&fine.mst, &density)?;
            let freq = simulate_sws(&fine.mst, &density, trials, seed)?;
            let mut csv = String::from("edge,source,target,weight,probability,frequency\n");
            for ((e, p), f) in fine.mst.edges().iter().zip(closed.weights()).zip(freq) {
                writeln!(csv, "{},{},{},{},{},{}", e.id, e.source, e.target, e.weight, p, f)
                    .map_err(|e| CliError::Data(e.into()))?;
            }
            std::fs::write(&out, csv).map_err(|e| CliError::Data(e.into()))?;
        }
    }
    Ok(())
}
