//! Reading and writing channel files.

use qdual::channel_file::{parse_channel, write_channel, ChannelEncoding};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ch = parse_channel(r#"{"builder": "amplitude_damping", "gamma": 0.25}"#)?;
    let text = write_channel(&ch, ChannelEncoding::Choi);
    println!("{text}");
    let back = parse_channel(&text)?;
    println!("round trip distance {:.2e}", back.action_distance(&ch));

    match parse_channel("{\n  \"dim\": 2,\n  \"kraus\": [[[1, 0], [0, \"x\"]]]\n}") {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
