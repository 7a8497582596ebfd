//! Product and entangled fidelity kernels on a few points, next to the
//! closed form of the product kernel.

use hybrid_mmd::kernels::{encode_entangled, encode_product, eval_kernel, fidelity, KernelSpec};

fn main() -> hybrid_mmd::Result<()> {
    let points = [[0.0, 0.0], [0.5, -0.2], [1.5, 1.0], [-2.0, 0.7]];
    let gamma = 1.0;

    let plus = encode_product(&points[0], gamma)?;
    println!("|+>|+> amplitudes: {:?}", plus.amplitudes());

    println!("\n{:>12} {:>12} {:>12} {:>12}", "pair", "product", "closed form", "entangled");
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let (x, y) = (&points[i], &points[j]);
            let product = fidelity(&encode_product(x, gamma)?, &encode_product(y, gamma)?)?;
            let closed: f64 = x
                .iter()
                .zip(y)
                .map(|(a, b)| (gamma * (a - b) / 2.0).cos().powi(2))
                .product();
            let entangled = fidelity(&encode_entangled(x, gamma, 2)?, &encode_entangled(y, gamma, 2)?)?;
            println!("{:>12} {product:>12.6} {closed:>12.6} {entangled:>12.6}", format!("({i},{j})"));
        }
    }

    // Smaller scalings flatten the kernel towards 1.
    for scaling in [1e-3, 1e-2, 1e-1, 1.0] {
        let k = eval_kernel(&KernelSpec::QuantumProduct { scaling }, &points[0], &points[3])?;
        println!("gamma = {scaling:<6} k = {k:.6}");
    }
    Ok(())
}
