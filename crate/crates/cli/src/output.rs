//! CSV, JSON and SVG emission. All text is built in memory so nothing is
//! written unless the whole run succeeded.

use std::fmt::Write as _;
use std::path::Path;

use kgwell::solver::DiagnosticSample;
use kgwell::ComplexField;

use crate::error::CliError;

/// Files of one run, in write order.
#[derive(Debug, Default)]
pub struct Bundle {
    files: Vec<(String, String)>,
}

impl Bundle {
    pub fn add(&mut self, name: impl Into<String>, content: String) {
        self.files.push((name.into(), content));
    }

    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        for (name, content) in &self.files {
            let p = dir.join(name);
            std::fs::write(&p, content).map_err(io(&p))?;
        }
        Ok(())
    }
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `coord,re_psi,im_psi,abs2_psi`, one row per node.
pub fn field_csv(field: &ComplexField, coord: &str) -> String {
    let mut s = format!("{coord},re_psi,im_psi,abs2_psi\n");
    for (x, z) in field.grid().coords().zip(field.psi()) {
        let _ = writeln!(s, "{},{},{},{}", num(x), num(z.re), num(z.im), num(z.norm_sqr()));
    }
    s
}

pub fn diagnostics_csv(diags: &[DiagnosticSample], time: &str, space: &str) -> String {
    let mut s = format!("{time},norm,energy,wall_{space},centroid_{space},width_{space}\n");
    for d in diags {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            num(d.time),
            num(d.norm),
            num(d.energy),
            num(d.wall),
            num(d.centroid),
            num(d.width)
        );
    }
    s
}

/// Line plot of `|ψ|²` against the grid coordinate.
pub fn density_svg(field: &ComplexField, title: &str, coord: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 360.0;
    const PAD: f64 = 40.0;
    let g = field.grid();
    let dens = field.density();
    let top = dens.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let sx = (W - 2.0 * PAD) / (g.end() - g.start());
    let sy = (H - 2.0 * PAD) / top;
    let mut pts = String::new();
    for (x, d) in g.coords().zip(&dens) {
        let _ = write!(pts, "{:.2},{:.2} ", PAD + (x - g.start()) * sx, H - PAD - d * sy);
    }
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
            "<rect x=\"{p}\" y=\"{p}\" width=\"{iw}\" height=\"{ih}\" fill=\"none\" stroke=\"#888\"/>\n",
            "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" points=\"{pts}\"/>\n",
            "<text x=\"{p}\" y=\"24\" font-family=\"sans-serif\" font-size=\"13\">{title}</text>\n",
            "<text x=\"{p}\" y=\"{yb}\" font-family=\"sans-serif\" font-size=\"11\">{coord} = {x0:.4}</text>\n",
            "<text x=\"{xr}\" y=\"{yb}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{coord} = {x1:.4}</text>\n",
            "<text x=\"{xr}\" y=\"24\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">max |psi|^2 = {top:.4e}</text>\n",
            "</svg>\n"
        ),
        w = W,
        h = H,
        p = PAD,
        iw = W - 2.0 * PAD,
        ih = H - 2.0 * PAD,
        pts = pts.trim_end(),
        title = title,
        coord = coord,
        yb = H - 12.0,
        xr = W - PAD,
        x0 = g.start(),
        x1 = g.end(),
        top = top,
    )
}
