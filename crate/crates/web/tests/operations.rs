use polariton_web::{amplitude_rows, density, efficiency_rows, optimum};

#[test]
fn amplitude_rows_are_flattened_quadruples() {
    let rows = amplitude_rows(5.0, 4.0, 9).unwrap();
    assert_eq!(rows.len(), 36);
    for r in rows.chunks(4) {
        assert!((r[1] + r[2] - r[3]).abs() < 1e-12);
        assert!(r[3] < 1.0);
    }
    assert!(amplitude_rows(5.0, 4.0, 1).is_err());
    assert!(amplitude_rows(-1.0, 4.0, 5).is_err());
}

#[test]
fn efficiency_curve_and_optimum_agree() {
    let rows = efficiency_rows(5.0, 0.0, 4.0, 81).unwrap();
    let best = rows.chunks(3).fold(
        (0.0, 0.0),
        |acc, r| if r[1] > acc.1 { (r[0], r[1]) } else { acc },
    );
    let o = optimum(5.0, 0.0).unwrap();
    assert!((o.separation - best.0).abs() <= 0.05);
    assert!(o.eta >= best.1);
}

#[test]
fn density_map_is_square() {
    let m = density(5.0, 0.2, 2.0, 0.1).unwrap();
    assert_eq!(
        m.photon_density.len(),
        m.points_per_axis * m.points_per_axis
    );
    assert!((m.photon_norm - m.spin_wave_norm).abs() < 1e-6);
}
