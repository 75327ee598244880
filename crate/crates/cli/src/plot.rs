//! CSV emitters for the figure-style data sets.

use std::error::Error;
use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use cpforge::channel::compose;
use cpforge::maps::{self, DepolarizerParams, TranslationParams};
use cpforge::measures::{self, state_from_bloch, BlochVector};

use crate::report::fmt_f;

/// Writes the named data set and returns the number of data rows.
pub fn write(scenario: &str, out: &Path, seed: u64) -> Result<usize, Box<dyn Error>> {
    match scenario {
        "fidelity-theta" => fidelity_theta(out),
        "bloch-image" => bloch_image(out, seed),
        "robust-domain" => robust_domain(out, seed),
        other => Err(format!(
            "unknown data set '{other}' (expected fidelity-theta, bloch-image, robust-domain)"
        )
        .into()),
    }
}

/// Input-fidelity of both repairs of the half z-shift along the x-z meridian,
/// one-degree steps from 0 to pi inclusive.
fn fidelity_theta(out: &Path) -> Result<usize, Box<dyn Error>> {
    let map = maps::translation(&TranslationParams {
        offset: [0.0, 0.0, 0.5],
    });
    let ax = (2f64 / 3.0).sqrt();
    let best = DepolarizerParams::single(ax, ax, 2.0 / 3.0)?;
    let uniform = DepolarizerParams::symmetric(2.0 / 3.0, 1)?;

    let mut w = BufWriter::new(File::create(out)?);
    writeln!(w, "theta,f_adm,f_spa,gap")?;
    let mut rows = 0;
    for deg in 0..=180u32 {
        let theta = PI * f64::from(deg) / 180.0;
        let rho = state_from_bloch(&BlochVector::new(theta.sin(), 0.0, theta.cos()))?;
        let f_adm = measures::fidelity_vs_input(&rho, &map, &best)?;
        let f_spa = measures::fidelity_vs_input(&rho, &map, &uniform)?;
        writeln!(
            w,
            "{},{},{},{}",
            fmt_f(theta),
            fmt_f(f_adm),
            fmt_f(f_spa),
            fmt_f(f_adm - f_spa)
        )?;
        rows += 1;
    }
    Ok(rows)
}

/// Uniformly sampled sphere points with their raw half-shift image and the
/// repaired image; the residual column is the repaired point's deviation from
/// the image ellipsoid.
fn bloch_image(out: &Path, seed: u64) -> Result<usize, Box<dyn Error>> {
    let map = maps::translation(&TranslationParams {
        offset: [0.0, 0.0, 0.5],
    });
    let ax = (2f64 / 3.0).sqrt();
    let best = DepolarizerParams::single(ax, ax, 2.0 / 3.0)?;
    let repaired = compose(&maps::adm(&best), &map)?;
    // Repaired sphere image: axes scaled by the repair, center lifted to
    // gamma * offset = 1/3.
    let center_z = (2.0 / 3.0) * 0.5;

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut w = BufWriter::new(File::create(out)?);
    writeln!(
        w,
        "pre_x,pre_y,pre_z,raw_x,raw_y,raw_z,repaired_x,repaired_y,repaired_z,ellipsoid_residual"
    )?;
    let mut rows = 0;
    for _ in 0..1000 {
        let pre = sphere_point(&mut rng, 1.0);
        let rho = state_from_bloch(&pre)?;
        let raw = measures::bloch_of_matrix(&map.apply_matrix(rho.matrix())?)?;
        let rep = measures::bloch_of_matrix(&repaired.apply_matrix(rho.matrix())?)?;
        let residual = (rep.r[0] / ax).powi(2)
            + (rep.r[1] / ax).powi(2)
            + ((rep.r[2] - center_z) / (2.0 / 3.0)).powi(2)
            - 1.0;
        let cols = [
            pre.r[0], pre.r[1], pre.r[2], raw.r[0], raw.r[1], raw.r[2], rep.r[0], rep.r[1],
            rep.r[2], residual,
        ];
        let line: Vec<String> = cols.iter().map(|&x| fmt_f(x)).collect();
        writeln!(w, "{}", line.join(","))?;
        rows += 1;
    }
    Ok(rows)
}

/// Images of spheres of growing radius under the kappa = 1 resistant map,
/// with a flag marking outputs that are still valid states.
fn robust_domain(out: &Path, seed: u64) -> Result<usize, Box<dyn Error>> {
    let map = maps::robust_map(1.0)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut w = BufWriter::new(File::create(out)?);
    writeln!(
        w,
        "radius,pre_x,pre_y,pre_z,post_x,post_y,post_z,post_norm,inside"
    )?;
    let mut rows = 0;
    for sixth in 1..=6u32 {
        let radius = f64::from(sixth) / 6.0;
        for _ in 0..200 {
            let pre = sphere_point(&mut rng, radius);
            let rho = state_from_bloch(&pre)?;
            let post = measures::bloch_of_matrix(&map.apply_matrix(rho.matrix())?)?;
            let norm = post.norm();
            let inside = u8::from(norm <= 1.0 + 1e-12);
            let cols = [
                radius, pre.r[0], pre.r[1], pre.r[2], post.r[0], post.r[1], post.r[2], norm,
            ];
            let line: Vec<String> = cols.iter().map(|&x| fmt_f(x)).collect();
            writeln!(w, "{},{}", line.join(","), inside)?;
            rows += 1;
        }
    }
    Ok(rows)
}

fn sphere_point(rng: &mut ChaCha20Rng, radius: f64) -> BlochVector {
    let z: f64 = 1.0 - 2.0 * rng.gen::<f64>();
    let phi: f64 = 2.0 * PI * rng.gen::<f64>();
    let s = (1.0 - z * z).max(0.0).sqrt();
    BlochVector::new(
        radius * s * phi.cos(),
        radius * s * phi.sin(),
        radius * z,
    )
}
