//! Scripted reference checks for the bundled scenario maps.
//!
//! Each id runs a fixed assertion list against closed-form values the library
//! has to reproduce. The same numbers are pinned by the test suite; this
//! command exists so a build can be spot-checked from the shell.

use std::error::Error;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use cpforge::channel::{compose, extend_local, Channel};
use cpforge::maps::{self, DepolarizerParams, TranslationParams};
use cpforge::matrix::ComplexMatrix;
use cpforge::measures::{
    fidelity_vs_input, m1, pauli_diamond_distance, pauli_weights, state_from_bloch, BlochVector,
};
use cpforge::optimizer::{
    self, feasibility, nonzero_witness, optimal_symmetric_tau, ObjectiveKind, SearchConfig,
};
use cpforge::{iso, measures, scenarios};

const TOL: f64 = 1e-9;
const EXACT: f64 = 1e-12;

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

type Checks = Result<Vec<Check>, Box<dyn Error>>;

fn approx(name: &str, got: f64, want: f64, tol: f64) -> Check {
    let dev = (got - want).abs();
    Check {
        name: name.to_string(),
        pass: dev <= tol,
        detail: format!("got {got:.14e}, want {want:.14e}, dev {dev:.1e}, tol {tol:.1e}"),
    }
}

fn at_least(name: &str, got: f64, floor: f64) -> Check {
    Check {
        name: name.to_string(),
        pass: got >= floor,
        detail: format!("got {got:.14e}, floor {floor:.14e}"),
    }
}

fn yes(name: &str, pass: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn spectrum(name: &str, got: &[f64], want: &[f64], tol: f64) -> Check {
    let dev = got
        .iter()
        .zip(want.iter())
        .map(|(g, w)| (g - w).abs())
        .fold(0.0f64, f64::max);
    Check {
        name: name.to_string(),
        pass: got.len() == want.len() && dev <= tol,
        detail: format!("max dev {dev:.1e}, tol {tol:.1e}"),
    }
}

fn matrices(name: &str, got: &ComplexMatrix, want: &ComplexMatrix, tol: f64) -> Check {
    let dev = got.max_abs_diff(want);
    Check {
        name: name.to_string(),
        pass: dev <= tol,
        detail: format!("max entry dev {dev:.1e}, tol {tol:.1e}"),
    }
}

pub fn run(id: &str) -> Checks {
    match id {
        "1" => half_shift(),
        "3a" => inverting_shift(),
        "3b" => corner_shift(),
        "4" => repolarizing_flip(),
        "5" => mirror_stretch(),
        "robust" => robust(),
        "thm1" => stacked_identity_forms(),
        "appC" => ebit_merge(),
        "appA" => local_extension(),
        other => Err(format!(
            "unknown scenario id '{other}' (expected 1, 3a, 3b, 4, 5, robust, thm1, appC, appA)"
        )
        .into()),
    }
}

/// Half z-shift and its two repairs: the searched stretch and the uniform one.
fn half_shift() -> Checks {
    let map = maps::translation(&TranslationParams {
        offset: [0.0, 0.0, 0.5],
    });
    let r6 = 6f64.sqrt();
    let r17 = 17f64.sqrt();
    let ax = (2f64 / 3.0).sqrt();
    let best = DepolarizerParams::single(ax, ax, 2.0 / 3.0)?;
    let uniform = DepolarizerParams::symmetric(2.0 / 3.0, 1)?;

    let mut out = Vec::new();
    out.push(spectrum(
        "searched repair composition spectrum",
        &compose(&maps::adm(&best), &map)?.b_spectrum(),
        &[5.0 / 3.0, 1.0 / 3.0, 0.0, 0.0],
        TOL,
    ));
    out.push(spectrum(
        "searched repair map spectrum",
        &maps::adm(&best).b_spectrum(),
        &[(5.0 + 2.0 * r6) / 6.0, 1.0 / 6.0, 1.0 / 6.0, (5.0 - 2.0 * r6) / 6.0],
        TOL,
    ));
    out.push(spectrum(
        "uniform repair composition spectrum",
        &compose(&maps::adm(&uniform), &map)?.b_spectrum(),
        &[(5.0 + r17) / 6.0, 1.0 / 3.0, (5.0 - r17) / 6.0, 0.0],
        TOL,
    ));
    out.push(spectrum(
        "uniform repair map spectrum",
        &maps::adm(&uniform).b_spectrum(),
        &[1.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0],
        TOL,
    ));
    out.push(approx(
        "searched repair mean shrink",
        m1(&best),
        (2.0 + 2.0 * r6) / 9.0,
        TOL,
    ));
    out.push(approx("uniform repair mean shrink", m1(&uniform), 2.0 / 3.0, TOL));

    for (label, theta) in [("0", 0.0), ("pi/2", PI / 2.0), ("pi", PI)] {
        let rho = state_from_bloch(&BlochVector::new(theta.sin(), 0.0, theta.cos()))?;
        let f_best = fidelity_vs_input(&rho, &map, &best)?;
        let f_uni = fidelity_vs_input(&rho, &map, &uniform)?;
        let want_best =
            (8.0 + r6 + 2.0 * theta.cos() + (2.0 - r6) * (2.0 * theta).cos()) / 12.0;
        let want_uni = (5.0 + theta.cos()) / 6.0;
        out.push(approx(
            &format!("searched repair fidelity at theta = {label}"),
            f_best,
            want_best,
            TOL,
        ));
        out.push(approx(
            &format!("uniform repair fidelity at theta = {label}"),
            f_uni,
            want_uni,
            TOL,
        ));
    }

    out.push(approx(
        "weight distance between the repairs",
        pauli_diamond_distance(&pauli_weights(&best)?, &pauli_weights(&uniform)?)?,
        (r6 - 2.0) / 3.0,
        TOL,
    ));
    out.push(approx(
        "best uniform shrink",
        optimal_symmetric_tau(&map)?.tau,
        2.0 / 3.0,
        TOL,
    ));

    let res = optimizer::optimize_adm(&map, ObjectiveKind::M1, &SearchConfig::default())?;
    let want = [ax, ax, 2.0 / 3.0];
    let dev = res
        .params
        .flat()
        .iter()
        .zip(want.iter())
        .map(|(g, w)| (g - w).abs())
        .fold(0.0f64, f64::max);
    out.push(yes(
        "search recovers the repair",
        dev <= 1e-4 && res.converged,
        format!("max param dev {dev:.1e}, tol 1.0e-4, converged {}", res.converged),
    ));
    out.push(approx(
        "search objective value",
        res.objective,
        (2.0 + 2.0 * r6) / 9.0,
        1e-6,
    ));
    Ok(out)
}

fn inverting_shift() -> Checks {
    let map = scenarios::inverting_shift_map();
    let r2 = 2f64.sqrt();
    let mut out = Vec::new();
    out.push(spectrum(
        "map spectrum",
        &map.b_spectrum(),
        &[2.0, r2, 0.0, -r2],
        TOL,
    ));
    let (cp, min_eig) = map.is_cp(1e-10);
    out.push(yes(
        "map is not completely positive",
        !cp,
        format!("min eigenvalue {min_eig:.14e}"),
    ));
    out.push(approx(
        "best uniform shrink",
        optimal_symmetric_tau(&map)?.tau,
        1.0 / (1.0 + 2.0 * r2),
        TOL,
    ));
    let res = optimizer::optimize_adm(&map, ObjectiveKind::M1, &SearchConfig::default())?;
    let dev = res
        .params
        .flat()
        .iter()
        .zip([0.0, 1.0, 0.0].iter())
        .map(|(g, w)| (g - w).abs())
        .fold(0.0f64, f64::max);
    out.push(yes(
        "search keeps only the y axis",
        dev <= 1e-4,
        format!("max param dev {dev:.1e}, tol 1.0e-4"),
    ));
    out.push(approx("search objective value", res.objective, 1.0 / 3.0, 1e-6));
    out.push(yes(
        "search certificates hold",
        res.composition_min_eig >= -1e-10 && res.adm_min_eig >= -1e-10,
        format!(
            "composition {:.2e}, repair {:.2e}",
            res.composition_min_eig, res.adm_min_eig
        ),
    ));
    Ok(out)
}

fn corner_shift() -> Checks {
    let map = scenarios::corner_touching_shift_map();
    let r2 = 2f64.sqrt();
    let mut out = Vec::new();
    out.push(spectrum(
        "map spectrum",
        &map.b_spectrum(),
        &[1.0 + r2, 1.0, 1.0 - r2, -1.0],
        TOL,
    ));
    let shift = maps::translation(&TranslationParams {
        offset: [-r2, 0.0, -r2],
    });
    out.push(matrices(
        "map equals the diagonal shift",
        map.a_matrix(),
        shift.a_matrix(),
        EXACT,
    ));
    out.push(approx(
        "best uniform shrink",
        optimal_symmetric_tau(&map)?.tau,
        1.0 / 3.0,
        TOL,
    ));
    let res = optimizer::optimize_adm(&map, ObjectiveKind::M1, &SearchConfig::default())?;
    out.push(at_least(
        "search objective beats the reference",
        res.objective,
        1.309 / 3.0 - 1e-3,
    ));

    let contact = scenarios::contact_state();
    let image = map.apply_matrix(contact.matrix())?;
    let r = measures::bloch_of_matrix(&image)?;
    let dev = (r.r[0] + FRAC_1_SQRT_2)
        .abs()
        .max(r.r[1].abs())
        .max((r.r[2] + FRAC_1_SQRT_2).abs());
    out.push(yes(
        "contact state lands on its spin flip",
        dev <= EXACT,
        format!("max component dev {dev:.1e}"),
    ));
    out.push(approx(
        "contact-state fidelity under the searched repair",
        fidelity_vs_input(
            &contact,
            &map,
            &DepolarizerParams::single(0.245, 0.819, 0.245)?,
        )?,
        151.0 / 400.0,
        TOL,
    ));
    out.push(approx(
        "contact-state fidelity under the uniform repair",
        fidelity_vs_input(&contact, &map, &DepolarizerParams::symmetric(1.0 / 3.0, 1)?)?,
        1.0 / 3.0,
        TOL,
    ));
    Ok(out)
}

fn repolarizing_flip() -> Checks {
    let mut out = Vec::new();
    for x in [1.5, 2.0, 10.0] {
        let map = scenarios::repolarizing_flip_map(x);
        let repair = scenarios::repolarizing_flip_repair(x);
        out.push(spectrum(
            &format!("map spectrum at x = {x}"),
            &map.b_spectrum(),
            &[1.0 + x, 0.0, 0.0, 1.0 - x],
            TOL,
        ));
        out.push(matrices(
            &format!("repair inverts the map at x = {x}"),
            compose(&maps::adm(&repair), &map)?.a_matrix(),
            &ComplexMatrix::identity(4),
            EXACT,
        ));
    }
    Ok(out)
}

fn mirror_stretch() -> Checks {
    let mut out = Vec::new();
    for x in [1.5, 2.0, 3.0, 10.0] {
        let map = scenarios::mirror_stretch_map(x);
        let comp = compose(&maps::adm(&scenarios::mirror_stretch_repair(x)), &map)?;
        let min_eig = comp.b_spectrum().last().copied().expect("spectrum nonempty");
        out.push(approx(
            &format!("repaired composition certificate at x = {x}"),
            min_eig,
            (1.0 - 2.0 / x) / 2.0,
            TOL,
        ));
        let (cp, _) = comp.is_cp(1e-10);
        out.push(yes(
            &format!("repair verdict at x = {x}"),
            cp == (x >= 2.0),
            format!("completely positive {cp}, expected {}", x >= 2.0),
        ));
    }
    let map = scenarios::mirror_stretch_map(3.0);
    out.push(approx(
        "best uniform shrink at x = 3",
        optimal_symmetric_tau(&map)?.tau,
        1.0 / (1.0 + 37f64.sqrt()),
        TOL,
    ));
    let witness = nonzero_witness(&map)?;
    let w = witness.flat();
    let feas = feasibility(&map, &witness, 1e-10)?;
    out.push(yes(
        "witness is feasible with every axis open",
        feas.feasible && w.iter().all(|c| c.abs() >= 1e-4),
        format!(
            "params [{:.6}, {:.6}, {:.6}], certificate {:.2e}",
            w[0], w[1], w[2], feas.comp_min_eig
        ),
    ));
    out.push(yes(
        "witness dominates the closed-form repair",
        w[0].abs() >= 1.0 / 9.0 - 1e-6 && w[1].abs() >= 1.0 / 9.0 - 1e-6,
        format!("|x| {:.6}, |y| {:.6}, floor {:.6}", w[0].abs(), w[1].abs(), 1.0 / 9.0),
    ));
    Ok(out)
}

fn robust() -> Checks {
    let mut out = Vec::new();
    for kappa in [1.0, 2.0, 5.0] {
        let map = maps::robust_map(kappa)?;
        let (cp, min_eig) = map.is_cp(1e-10);
        out.push(yes(
            &format!("map is not completely positive at kappa = {kappa}"),
            !cp,
            format!("min eigenvalue {min_eig:.14e}"),
        ));

        let feasible = |beta: f64| -> Result<bool, Box<dyn Error>> {
            let p = DepolarizerParams::single(0.0, beta, 0.0)?;
            Ok(feasibility(&map, &p, 1e-10)?.feasible)
        };
        let boundary = if feasible(1.0)? {
            1.0
        } else {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if feasible(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        out.push(approx(
            &format!("largest y-only repair at kappa = {kappa}"),
            boundary,
            (1.0f64 / kappa).min(1.0),
            TOL,
        ));

        let edge = DepolarizerParams::single(0.0, 1.0 / kappa, 0.0)?;
        out.push(spectrum(
            &format!("edge composition spectrum at kappa = {kappa}"),
            &compose(&maps::adm(&edge), &map)?.b_spectrum(),
            &[1.0, 1.0, 0.0, 0.0],
            TOL,
        ));

        let input = ComplexMatrix::from_real(&[&[0.5, -0.5], &[-0.5, 0.5]]);
        let want = ComplexMatrix::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]);
        out.push(matrices(
            &format!("minus-x state maps to minus-z at kappa = {kappa}"),
            &map.apply_matrix(&input)?,
            &want,
            EXACT,
        ));
    }

    let literal = ComplexMatrix::from_real(&[
        &[1.0, 1.0, 1.0, 0.0],
        &[1.0, 1.0, 1.0, 0.0],
        &[1.0, 1.0, 0.0, -1.0],
        &[0.0, 0.0, -1.0, 0.0],
    ]);
    out.push(matrices(
        "reshuffle at kappa = 1",
        maps::robust_map(1.0)?.b_matrix(),
        &literal,
        EXACT,
    ));

    let threshold = (3.0 - 5f64.sqrt()) / 2.0;
    let below = maps::robust_map(threshold - 0.08)?.is_cp(1e-10).0;
    let above = maps::robust_map(threshold + 0.02)?.is_cp(1e-10).0;
    out.push(yes(
        "positivity flips at the threshold",
        below && !above,
        format!("cp below {below}, cp above {above}"),
    ));
    Ok(out)
}

fn stacked_identity_forms() -> Checks {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let d = 1usize << n;
        let form = iso::pauli_form(n)?;
        out.push(matrices(
            &format!("pauli form matches the stacked identity at n = {n}"),
            &form,
            &stacked_identity(d),
            EXACT,
        ));
        let mut eigs = form.eigh()?.eigenvalues;
        eigs.sort_by(|a, b| b.total_cmp(a));
        let mut want = vec![0.0; d * d];
        want[0] = d as f64;
        out.push(spectrum(
            &format!("pauli form spectrum at n = {n}"),
            &eigs,
            &want,
            TOL,
        ));
        let v = ComplexMatrix::identity(d).vectorize();
        out.push(matrices(
            &format!("pauli form rescales the stacked identity at n = {n}"),
            &(&form * &v),
            &v.scale_re(d as f64),
            EXACT,
        ));
    }
    let form = iso::gellmann_form(1)?;
    out.push(matrices(
        "gell-mann form matches the stacked identity",
        &form,
        &stacked_identity(3),
        EXACT,
    ));
    let mut eigs = form.eigh()?.eigenvalues;
    eigs.sort_by(|a, b| b.total_cmp(a));
    let mut want = vec![0.0; 9];
    want[0] = 3.0;
    out.push(spectrum("gell-mann form spectrum", &eigs, &want, TOL));
    Ok(out)
}

fn stacked_identity(d: usize) -> ComplexMatrix {
    let mut rows = vec![vec![0.0; d * d]; d * d];
    for i in 0..d {
        for j in 0..d {
            rows[i * d + i][j * d + j] = 1.0;
        }
    }
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    ComplexMatrix::from_real(&refs)
}

fn ebit_merge() -> Checks {
    let mut out = Vec::new();
    for k in 2..=4usize {
        let u = iso::ebit_merge_unitary(k)?;
        let dim = u.rows();
        let mut entry_dev = 0.0f64;
        let mut rows_ok = true;
        for r in 0..dim {
            let mut ones = 0usize;
            for c in 0..dim {
                let e = u[(r, c)];
                entry_dev = entry_dev.max(e.im.abs()).max(e.re.abs().min((e.re - 1.0).abs()));
                if (e.re - 1.0).abs() <= EXACT {
                    ones += 1;
                }
            }
            rows_ok &= ones == 1;
        }
        out.push(yes(
            &format!("merge operator is a permutation at k = {k}"),
            rows_ok && entry_dev <= EXACT,
            format!("entry dev {entry_dev:.1e}, one unit entry per row {rows_ok}"),
        ));
        out.push(matrices(
            &format!("merge operator is orthogonal at k = {k}"),
            &(&u * &u.transpose()),
            &ComplexMatrix::identity(dim),
            EXACT,
        ));

        let pair = ComplexMatrix::from_real(&[&[1.0], &[0.0], &[0.0], &[1.0]]);
        let mut stacked = pair.clone();
        for _ in 1..k {
            stacked = stacked.kron(&pair);
        }
        let d = 1usize << k;
        let mut want_rows = vec![vec![0.0]; d * d];
        for m in 0..d {
            want_rows[m * d + m][0] = 1.0;
        }
        let refs: Vec<&[f64]> = want_rows.iter().map(Vec::as_slice).collect();
        out.push(matrices(
            &format!("merged pairs form one larger pair at k = {k}"),
            &(&u * &stacked),
            &ComplexMatrix::from_real(&refs),
            EXACT,
        ));
    }
    Ok(out)
}

fn local_extension() -> Checks {
    let mut out = Vec::new();
    let erase = maps::complete_depolarizer();
    let rho = ComplexMatrix::identity(4).scale_re(0.25);

    let naive = erase.a_matrix().kron(&ComplexMatrix::identity(4));
    let bell_quarter = ComplexMatrix::from_real(&[
        &[0.125, 0.0, 0.0, 0.125],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.125, 0.0, 0.0, 0.125],
    ]);
    out.push(matrices(
        "plain tensor extension entangles the untouched qubit",
        &(&naive * &rho.vectorize()),
        &bell_quarter.vectorize(),
        EXACT,
    ));

    let correct = extend_local(&[erase, Channel::identity(2)])?;
    let mut rows = vec![vec![0.0; 16]; 16];
    for (r, c) in [
        (0, 0),
        (0, 10),
        (1, 1),
        (1, 11),
        (4, 4),
        (4, 14),
        (5, 5),
        (5, 15),
        (10, 0),
        (10, 10),
        (11, 1),
        (11, 11),
        (14, 4),
        (14, 14),
        (15, 5),
        (15, 15),
    ] {
        rows[r][c] = 0.5;
    }
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    out.push(matrices(
        "local extension matches its closed form",
        correct.a_matrix(),
        &ComplexMatrix::from_real(&refs),
        EXACT,
    ));
    out.push(matrices(
        "local extension fixes the maximally mixed pair",
        &correct.apply_matrix(&rho)?,
        &rho,
        EXACT,
    ));
    Ok(out)
}
