use std::f64::consts::PI;

use polariton_core::modes::{density_maps, mode_average, ChannelGeometry, GridSpec, ModeOptions};
use polariton_core::network::{cz_truth_table, Branch, RailNetwork};
use polariton_core::scattering::{exchange_phase_integral, SolverOptions};
use polariton_core::sweeps::sweep_separation;
use polariton_core::{ModelParams, Sign};

fn model(d_b: f64) -> ModelParams {
    ModelParams::dimensionless(d_b, Sign::Positive).unwrap()
}

#[test]
fn loss_free_point_figure_of_merit() {
    let opts = ModeOptions {
        solver: SolverOptions::default().loss_free(),
        ..Default::default()
    };
    for (d_b, l) in [(0.5, 0.0), (2.0, 1.0), (5.0, 2.5)] {
        let m = model(d_b);
        let f = mode_average(&m, &ChannelGeometry::symmetric(l, 0.0).unwrap(), &opts)
            .unwrap()
            .figure_of_merit();
        let phi = exchange_phase_integral(&m, l).unwrap();
        assert!(
            (f - phi.tanh().powi(4)).abs() < 1e-8,
            "{f} vs {}",
            phi.tanh().powi(4)
        );
    }
}

#[test]
fn point_efficiency_peaks_away_from_head_on() {
    let grid: Vec<f64> = (0..=40).map(|k| k as f64 * 0.1).collect();
    let rows = sweep_separation(&model(5.0), &grid, 0.0, &ModeOptions::default()).unwrap();
    let best = rows.iter().map(|r| r.eta.unwrap()).fold(0.0, f64::max);
    assert!(best > rows[0].eta.unwrap());
}

#[test]
fn density_map_norms_agree() {
    let g = ChannelGeometry::symmetric(2.0, 0.2).unwrap();
    let grid = GridSpec::around(&g).unwrap();
    let map = density_maps(&model(5.0), &g, &grid, &ModeOptions::default()).unwrap();
    assert!(map.photon_density.iter().all(|d| *d >= 0.0));
    assert!(map.photon_norm <= 1.0);
    assert!((map.photon_norm - map.spin_wave_norm).abs() < 1e-6);
    // losses remove norm
    assert!(map.photon_norm < 0.999);
}

#[test]
fn truth_table_phase_is_protected() {
    for d_b in [1.0, 5.0, 30.0] {
        let net = RailNetwork::three_rail(1.5, 0.0).unwrap();
        let table = cz_truth_table(&net, &model(d_b), &ModeOptions::default()).unwrap();
        let inputs: Vec<&str> = table.iter().map(|r| r.input.as_str()).collect();
        assert_eq!(inputs, ["LL", "LR", "RL", "RR"]);
        for row in &table[..3] {
            assert_eq!((row.fidelity, row.phase), (1.0, 0.0));
        }
        let rr = &table[3];
        assert_eq!(rr.branch, Some(Branch::DoubleSwap));
        assert!(rr.fidelity > 0.0);
        assert!((rr.phase - PI).abs() < 1e-6);
    }
}

#[test]
fn finite_width_network_reports_both_figures() {
    let net = RailNetwork::three_rail(1.5, 0.2).unwrap();
    let opts = ModeOptions {
        table_nodes: 512,
        ..Default::default()
    };
    let r = polariton_core::network::simulate_network(&net, &model(5.0), &opts).unwrap();
    let total: f64 = r.outcomes.iter().map(|o| o.probability).sum();
    assert!(total <= 1.0 && r.loss >= 0.0);
    assert!((total + r.loss - 1.0).abs() < 1e-12);
    assert!(r.figure_of_merit > 0.0 && r.sequential_figure_of_merit > 0.0);
    assert!((r.figure_of_merit - r.sequential_figure_of_merit).abs() > 0.0);
}
