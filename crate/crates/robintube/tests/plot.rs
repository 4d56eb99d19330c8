use robintube::plot::{mesh_svg, LinePlot, Series};

#[test]
fn line_plot_has_one_polyline_per_series() {
    let x = [0.2, 0.1, 0.05];
    let svg = LinePlot::new("levels <eps>", "eps", "err")
        .log_x()
        .with(Series::line("a", &x, &[1e-2, 3e-3, 8e-4]).with_markers())
        .with(Series::line("b", &x, &[2e-2, 5e-3, 1e-3]).dashed())
        .to_svg();
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert_eq!(svg.matches("<circle").count(), 3);
    assert!(svg.contains("levels &lt;eps&gt;"));
}

#[test]
fn degenerate_ranges_still_render() {
    let flat = LinePlot::new("flat", "s", "q").with(Series::line("q", &[0.0, 1.0], &[0.0, 0.0])).to_svg();
    assert!(!flat.contains("NaN") && !flat.contains("inf"));
    let empty = LinePlot::new("empty", "s", "q").to_svg();
    assert!(!empty.contains("NaN"));
}

#[test]
fn mesh_drawing_colors_every_boundary_edge() {
    let v = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    let svg = mesh_svg(&v, &[[0, 1, 2]], &[([0, 1], 1.0), ([1, 2], 0.5), ([2, 0], 0.0)]);
    assert_eq!(svg.matches("<line").count(), 3);
    assert!(svg.contains("rgb(255,0,0)") && svg.contains("rgb(0,0,255)"));
}
