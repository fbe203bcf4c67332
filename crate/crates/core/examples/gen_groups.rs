//! Writes the bundled `.grp` files into `data/groups/`.

use std::fs;
use std::path::Path;

use trianglecount::permgroup::{
    affine_general_linear_3_2, alternating, cyclic, element_order_histogram, format_grp,
    octonion_sign_automorphisms, product_with_cycler, psl2, symmetric, PermGroup,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/groups");
    fs::create_dir_all(&dir)?;
    let l27 = psl2(7)?;
    let groups: Vec<(&str, &str, PermGroup)> = vec![
        ("psl2_7", "L2(7) on the projective line over GF(7)", l27.clone()),
        ("psl2_8", "L2(8) on the projective line over GF(8)", psl2(8)?),
        ("cyclic7", "cyclic group of order 7", cyclic(7)),
        ("a4", "alternating group A4", alternating(4)),
        ("a5", "alternating group A5", alternating(5)),
        ("s4", "symmetric group S4", symmetric(4)),
        (
            "2^3.L3(2)",
            "signed permutations of the octonion units e0..e6 preserving multiplication; point 2i+1 is +e_i, 2i+2 is -e_i",
            octonion_sign_automorphisms(),
        ),
        ("agl3_2", "split extension 2^3:L3(2) acting on GF(2)^3", affine_general_linear_3_2()),
        ("l2_7_cubed_3", "L2(7) x L2(7) x L2(7) extended by the cyclic shift of the factors", product_with_cycler(&l27, 3)?.group),
    ];
    for (name, comment, g) in groups {
        let file = match name {
            "2^3.L3(2)" => "octonion_2e3_l3_2".to_string(),
            n => n.to_string(),
        };
        let text = format!(
            "# {comment}\n# order {}\n{}",
            g.order(),
            format_grp(name, &g)
        );
        fs::write(dir.join(format!("{file}.grp")), text)?;
        if g.order() <= 1_000_000 {
            println!("{name} {} {:?}", g.order(), element_order_histogram(&g)?);
        }
    }
    Ok(())
}
