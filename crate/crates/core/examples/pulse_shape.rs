// Raised-cosine pulse: Nyquist zeros, the removable singularity and the
// recurrence used along arithmetic progressions.

use oddm_dse::pulse::{sinc, RaisedCosine};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = RaisedCosine::new(0.65, 8);
    println!("  x      a(x)");
    for i in -16..=16 {
        let x = i as f64 * 0.5;
        println!("{x:5.1}  {:+.6}", p.eval(x));
    }

    // 2βx = 1 hits the singular point of the taper
    let x_sing = 1.0 / (2.0 * p.roll_off());
    println!("a({x_sing:.4}) = {:.12}, sinc there = {:.12}", p.eval(x_sing), sinc(x_sing));

    let mut row = vec![0.0; 8];
    p.eval_progression(-3.3, 0.9, &mut row);
    let worst = row
        .iter()
        .enumerate()
        .map(|(i, v)| (v - p.eval(-3.3 + 0.9 * i as f64)).abs())
        .fold(0.0, f64::max);
    println!("progression vs pointwise: max diff {worst:.1e}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
