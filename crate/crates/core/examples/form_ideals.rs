//! The form ring Z/4 with λ = -1 and its lattice of form ideals.

use std::sync::Arc;

use formring::form_ideal::{enumerate_form_ideals, symmetrized_product, validate_form_ideal};
use formring::ring::{validate_form_ring, zmod, FormRing};

fn main() -> formring::error::Result<()> {
    let fr = FormRing::with_bound(Arc::new(zmod(4)?), 3, true)?;
    println!("form ring valid: {}", validate_form_ring(&fr).is_valid());
    println!("Λ = {:?}", fr.lam().to_vec());

    let lattice = enumerate_form_ideals(&fr, 1 << 16)?;
    for fi in &lattice {
        assert!(validate_form_ideal(&fr, fi).is_valid());
        println!("I = {:?}, Γ = {:?}", fi.ideal.members.to_vec(), fi.gamma.to_vec());
    }

    // the symmetrised product is not associative in general
    for a in &lattice {
        for b in &lattice {
            let p = symmetrized_product(&fr, a, b);
            println!(
                "({:?},{:?}) ∘ ({:?},{:?}) = ({:?},{:?})",
                a.ideal.members.to_vec(),
                a.gamma.to_vec(),
                b.ideal.members.to_vec(),
                b.gamma.to_vec(),
                p.ideal.members.to_vec(),
                p.gamma.to_vec()
            );
        }
    }
    Ok(())
}
