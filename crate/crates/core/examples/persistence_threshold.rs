//! The mixing rate at which a population stops persisting.

use reduction_lab::gallery::LinearFamily;
use reduction_lab::lab::find_threshold;
use reduction_lab::SquareMatrix;

fn main() -> reduction_lab::Result<()> {
    let a = SquareMatrix::from_rows(&[[-1.0, 1.0], [1.0, -1.0]])?;
    for sink in [-1.5, -2.0, -3.0] {
        let family = LinearFamily::with_growth(a.clone(), &[1.0, sink])?;
        // spb(mA + V) = 0 at m = sink / (1 + sink) for V = diag(1, sink), sink < -1.
        match find_threshold(&family, 0.1, 50.0) {
            Ok(m) => println!("sink {sink}: m* = {m:.10} (exact {:.10})", sink / (1.0 + sink)),
            Err(e) => println!("sink {sink}: {e}"),
        }
    }
    let persistent = LinearFamily::with_growth(a, &[1.0, -1.0])?;
    println!("sink -1: {}", find_threshold(&persistent, 0.1, 50.0).unwrap_err());
    Ok(())
}
