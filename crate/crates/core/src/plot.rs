//! CSV plot data for fans and amoeba clouds.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::job::{ConeSet, JobOutput, ResultDocument};
use crate::ring::Direction;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotFile {
    pub name: String,
    pub contents: String,
}

const AXES: [&str; 3] = ["dir_x", "dir_y", "dir_z"];

/// Unit-normalized rays, one per row.
pub fn rays_csv(rank: usize, rays: &[Direction]) -> Result<String> {
    if rank == 0 || rank > AXES.len() {
        return Err(Error::Unsupported(format!("cannot plot a fan of rank {rank}")));
    }
    let mut out = AXES[..rank].join(",");
    out.push('\n');
    for d in rays {
        let row: Vec<String> = d.to_f64_unit().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    Ok(out)
}

fn fan_file(name: &str, set: &ConeSet) -> Result<PlotFile> {
    Ok(PlotFile { name: format!("{name}.csv"), contents: rays_csv(set.rank, &set.rays)? })
}

/// The CSV files for a result: rays of its fans, or the points of an
/// amoeba cloud. Results without either are an error.
pub fn emit_plot_data(doc: &ResultDocument) -> Result<Vec<PlotFile>> {
    match &doc.result {
        JobOutput::Trop(t) => Ok(vec![fan_file("rays", &t.fan)?]),
        JobOutput::Sigma(s) => Ok(vec![fan_file("sigma_rays", &s.proved_sigma)?, fan_file("complement_rays", &s.proved_complement)?]),
        JobOutput::Group(g) => Ok(vec![
            fan_file("sigma_rays", &g.sigma.proved_sigma)?,
            fan_file("complement_rays", &g.sigma.proved_complement)?,
        ]),
        JobOutput::Dyn(d) => Ok(vec![fan_file("push_rays", &d.sigma_of_push)?]),
        JobOutput::Amoeba(a) => Ok(vec![PlotFile { name: "amoeba.csv".into(), contents: a.cloud.to_csv() }]),
        JobOutput::H2(_) => Err(Error::Unsupported("hyperbolic reports carry no plot data".into())),
    }
}
