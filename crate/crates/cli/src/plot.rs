//! Minimal SVG rendering of a per-sample max-probability trace with the
//! selected window shaded. Display only; nothing reads these files back.

use cycleseg::types::{ProbabilityMatrix, WindowDecodeResult};

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 260.0;
const MARGIN: f64 = 20.0;

pub fn window_plot(p: &ProbabilityMatrix, result: &WindowDecodeResult) -> String {
    let t_len = p.t_len();
    let inner_w = WIDTH - 2.0 * MARGIN;
    let inner_h = HEIGHT - 2.0 * MARGIN;
    let x = |t: usize| MARGIN + inner_w * t as f64 / (t_len.max(2) - 1) as f64;
    let y = |v: f64| MARGIN + inner_h * (1.0 - v);

    let mut points = String::new();
    for t in 0..t_len {
        let max = p.row(t).iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        points.push_str(&format!("{:.2},{:.2} ", x(t), y(max)));
    }

    let shade_x = x(result.start);
    let shade_w = x((result.start + result.width - 1).min(t_len - 1)) - shade_x;

    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<rect x=\"{sx:.2}\" y=\"{my}\" width=\"{sw:.2}\" height=\"{ih}\" ",
            "fill=\"#cfe8cf\" stroke=\"none\"/>\n",
            "<polyline points=\"{pts}\" fill=\"none\" stroke=\"#235a97\" stroke-width=\"1\"/>\n",
            "<rect x=\"{my}\" y=\"{my}\" width=\"{iw}\" height=\"{ih}\" fill=\"none\" ",
            "stroke=\"#444\" stroke-width=\"1\"/>\n",
            "<text x=\"{tx:.2}\" y=\"{ty}\" font-size=\"12\" fill=\"#111\">",
            "window [{start}, {end})</text>\n",
            "</svg>\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        my = MARGIN,
        iw = inner_w,
        ih = inner_h,
        sx = shade_x,
        sw = shade_w.max(1.0),
        pts = points.trim_end(),
        tx = shade_x,
        ty = MARGIN - 5.0,
        start = result.start,
        end = result.start + result.width,
    )
}
