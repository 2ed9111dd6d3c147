// Spectral exponent of dumbbell graphs as the bar gets longer.

use critex::growth::spectral_delta;
use critex::zeta::dumbbell;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in [1, 2, 4, 8] {
        let s = spectral_delta(&dumbbell(3, 4, n)?)?;
        println!("D(3,4,{n}): lambda_max = {:.6}, delta = {:.6}", s.lambda_max, s.value);
    }
    Ok(())
}

fn main() {
    run_example().unwrap();
}
