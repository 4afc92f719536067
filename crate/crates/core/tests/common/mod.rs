#![allow(dead_code)]

use dihedral_core::bounds;
use dihedral_core::{Tetra, Tolerance, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn tol() -> Tolerance {
    Tolerance::default()
}

pub fn unit_vector<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Random orthonormal, right-handed frame.
pub fn frame<R: Rng>(rng: &mut R) -> [Vec3; 3] {
    let u = unit_vector(rng);
    let w = loop {
        let w = unit_vector(rng);
        let w = w - u * w.dot(u);
        if w.norm() > 0.1 {
            break w / w.norm();
        }
    };
    [u, w, u.cross(w)]
}

/// Tetrahedron with vertices in `[-1, 1]^3` and volume at least 0.01.
pub fn generic_tetra<R: Rng>(rng: &mut R) -> Tetra {
    loop {
        let v = [(); 4].map(|_| {
            Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
        });
        let t = Tetra::degenerate(v);
        if t.volume() > 0.01 {
            return t;
        }
    }
}

/// Path tetrahedron with legs in `[0.2, 5]` along a random frame.
pub fn path_tetra<R: Rng>(rng: &mut R) -> Tetra {
    let [u, v, w] = frame(rng);
    let legs = [(); 3].map(|_| rng.gen_range(0.2..5.0));
    let origin = Vec3::new(
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
    );
    let a = origin + u * legs[0];
    let b = a + v * legs[1];
    let c = b + w * legs[2];
    Tetra::new([origin, a, b, c], &tol()).unwrap()
}

pub fn fourball_tetra(seed: u64, index: u64) -> Tetra {
    bounds::random_fourball_sample(seed, index, &tol())
}
