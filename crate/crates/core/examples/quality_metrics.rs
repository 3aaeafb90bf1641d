//! MS-SSIM, PSNR and ERGAS under increasing noise and blur.

use fusionbench::filter::gauss_approx;
use fusionbench::imgcore::random_radiance;
use fusionbench::{ColorSpace, Image, MetricReport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> fusionbench::Result<()> {
    let reference = random_radiance(256, 256, 9)?.clamped();
    let (w, h) = reference.dims();

    println!("{:<12} {:>8} {:>8} {:>8}", "degradation", "ms_ssim", "psnr_db", "ergas");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for sigma in [0.0f64, 0.01, 0.03, 0.1] {
        let noise = Normal::new(0.0, sigma).expect("valid sigma");
        let data = reference.data().iter().map(|v| v + noise.sample(&mut rng)).collect();
        let test = Image::new(w, h, ColorSpace::Rgb, data)?.clamped();
        let m = MetricReport::compute(&test, &reference)?;
        println!("{:<12} {:>8.4} {:>8.2} {:>8.2}", format!("noise {sigma}"), m.ms_ssim, m.psnr, m.ergas);
    }
    for sigma in [1.0, 2.0, 4.0] {
        let data = reference.planes().flat_map(|p| gauss_approx(p, w, h, sigma)).collect();
        let test = Image::new(w, h, ColorSpace::Rgb, data)?;
        let m = MetricReport::compute(&test, &reference)?;
        println!("{:<12} {:>8.4} {:>8.2} {:>8.2}", format!("blur {sigma}"), m.ms_ssim, m.psnr, m.ergas);
    }
    Ok(())
}
