//! Newline-delimited JSON-RPC over a reader/writer pair.

use std::io::{self, BufRead, Write};

use crate::rpc::RpcHandler;

/// Serve until the reader reaches end of input. Blank lines are skipped.
pub fn serve<R: BufRead, W: Write>(handler: &RpcHandler, reader: R, mut writer: W) -> io::Result<()> {
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(response) = handler.handle_text(&line) {
            writer.write_all(response.as_bytes())?;
            writer.write_all(b"\n")?;
            writer.flush()?;
        }
    }
    Ok(())
}
