use cyclic_adams::adams;
use cyclic_adams::complex::{FreeComplex, PointSet};
use cyclic_adams::equivariant::{cyclic_action, eigenspace, tensor_power, DEFAULT_WORD_BOUND};
use cyclic_adams::field::{Field, FieldDescriptor};
use cyclic_adams::poly::Poly;
use std::time::Instant;

fn main() {
    let field = FieldDescriptor::Cyclotomic(5);
    let x = Poly::from_integers(field, &[0, 1]);
    let x1 = Poly::from_integers(field, &[-1, 1]);
    let kx = FreeComplex::koszul(&x);
    let k1 = FreeComplex::koszul(&x1);
    let prod = kx.tensor(&k1).unwrap();
    let ctx = adams::ClassCtx::with_global(PointSet::of_integers(field, &[0, 1]));

    let t0 = Instant::now();
    let t = tensor_power(&prod, 5, DEFAULT_WORD_BOUND).unwrap();
    eprintln!("tensor_power(rank4, 5): {:?}", t0.elapsed());

    let t0 = Instant::now();
    let c = cyclic_action(&t);
    eprintln!("cyclic_action: {:?}", t0.elapsed());

    let roots = Field::new(field).unwrap().roots_of_unity(5).unwrap();
    let t0 = Instant::now();
    let e = eigenspace(&c, &roots.roots[0]).unwrap();
    eprintln!("eigenspace(1): {:?} total rank {}", t0.elapsed(), e.total_rank());

    let t0 = Instant::now();
    let r = e.reduce();
    eprintln!("reduce: {:?} -> rank {}", t0.elapsed(), r.total_rank());

    let t0 = Instant::now();
    let h = r.homology();
    eprintln!("homology: {:?} {}", t0.elapsed(), h);

    let t0 = Instant::now();
    let class = e.k0_class(&ctx.points, true).unwrap();
    eprintln!("k0_class full: {:?} {}", t0.elapsed(), class);

    let t0 = Instant::now();
    let psi = adams::cyclic_psi(&prod, 5, &ctx).unwrap();
    eprintln!("cyclic_psi(prod, 5): {:?} {}", t0.elapsed(), psi);
}
