//! Kernels rebuilt by repeated Gaussian convolution, compared with the
//! closed form, and the kernel-combinant bridge checked by quadrature.
//!
//! ```text
//! cargo run --example ring_oracle
//! ```

use boseglow::multiplicity::combinant;
use boseglow::oracle::{ring_recursion, HermiteRule};
use boseglow::params::DerivedParams;
use boseglow::spectra::GaussianKernel;
use boseglow::Momentum3;

fn main() -> Result<(), boseglow::Error> {
    let d = DerivedParams::natural(1.0, 2.5)?;
    let n0 = 0.8;
    let ring = ring_recursion(&d, n0, 20)?;
    let rule = HermiteRule::new(64)?;
    let k1 = Momentum3::new(0.4, -0.3, 0.9);
    let k2 = Momentum3::new(-0.2, 0.7, 0.1);

    println!("x = {:.3}, n0 = {n0}", d.x);
    println!(
        "{:>3} {:>12} {:>12} {:>12} {:>12}",
        "n", "a_n", "g_n", "kernel dev", "bridge dev"
    );
    for c in &ring {
        let exact = GaussianKernel::new(&d, n0, c.n);
        let dev = (c.ln_eval(&k1, &k2) - exact.ln_eval(&k1, &k2))
            .exp_m1()
            .abs();
        let integral = rule.integrate_3d(1.0, |k| exact.eval(k, k));
        let bridge = integral / (c.n as f64 * combinant(&d, n0, c.n)) - 1.0;
        println!(
            "{:>3} {:>12.8} {:>12.8} {:>12.3e} {:>12.3e}",
            c.n,
            c.a,
            c.g,
            dev,
            bridge.abs()
        );
    }
    let last = ring.last().unwrap();
    println!(
        "a - g/2 at n = 20: {:.12}, limit sqrt(1+2x)/(2 sigma_T^2) = {:.12}",
        last.a - last.g / 2.0,
        (1.0 + 2.0 * d.x).sqrt() / 2.0
    );
    Ok(())
}
