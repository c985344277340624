//! Five balanced clusters at the theoretical separation: the centered
//! spectrum shows four values above T and a bulk below it. Prints the table
//! as CSV.

use csvt::theory::five_cluster_spectra;

fn main() -> csvt::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let demo = five_cluster_spectra(seed)?;
    let above = demo
        .centered
        .iter()
        .filter(|&&s| s > demo.threshold)
        .count();
    eprintln!(
        "{above} singular values above T = {:.3}, K_hat = {}",
        demo.threshold,
        above + 1
    );
    demo.write_csv(std::io::stdout().lock())
}
