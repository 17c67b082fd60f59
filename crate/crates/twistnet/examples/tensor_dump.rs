//! Labelled tensor contraction and the text dump format.
use twistnet::{delta_tensor, xor_tensor, Tensor};

fn main() -> twistnet::Result<()> {
    let d = delta_tensor(2, 3)?;
    let x = xor_tensor(2)?;
    println!("delta labels {:?}, xor labels {:?}", d.labels(), x.labels());
    let t = d.contract(&x, &[("i2", "i")])?;
    println!("delta·xor: labels {:?}, nonzero entries {}", t.labels(), t.nnz(1e-12));
    let text = t.dump();
    print!("{}", text.lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    let back = Tensor::parse_dump(&text)?;
    println!("round trip exact: {}", back == t);
    Ok(())
}
