use std::sync::Arc;

use tablestack_assoc::{Triple, Value};

use crate::error::StoreError;
use crate::store::{TableState, TabletStore};

/// Serialized size a triple is accounted at for block thresholds and
/// service time: row + column + rendered value + 3 separator bytes.
pub(crate) fn serialized_size(t: &Triple) -> usize {
    let value_len = match &t.val {
        Value::Text(s) => s.len(),
        Value::Num(x) => x.to_string().len(),
    };
    t.row.len() + t.col.len() + value_len + 3
}

/// Client-side buffering writer. Triples accumulate until their serialized
/// size reaches the configured block size, then the whole buffer is sent as
/// one block; closing flushes the final partial block.
pub struct BatchWriter {
    store: Arc<TabletStore>,
    table: Arc<TableState>,
    buffer: Vec<Triple>,
    buffered_bytes: usize,
    closed: bool,
}

impl BatchWriter {
    pub(crate) fn new(store: Arc<TabletStore>, table: Arc<TableState>) -> BatchWriter {
        BatchWriter {
            store,
            table,
            buffer: Vec::new(),
            buffered_bytes: 0,
            closed: false,
        }
    }

    pub fn buffered(&self) -> usize {
        self.buffer.len()
    }

    pub fn put(&mut self, triples: &[Triple]) -> Result<(), StoreError> {
        if self.closed {
            return Err(StoreError::WriterClosed);
        }
        let block_bytes = self.store.config().batch_block_bytes;
        for t in triples {
            self.buffered_bytes += serialized_size(t);
            self.buffer.push(t.clone());
            if self.buffered_bytes >= block_bytes {
                self.send_block();
            }
        }
        Ok(())
    }

    /// Flushes the remaining partial block and invalidates the writer.
    pub fn close(&mut self) -> Result<(), StoreError> {
        if self.closed {
            return Err(StoreError::WriterClosed);
        }
        self.send_block();
        self.closed = true;
        Ok(())
    }

    fn send_block(&mut self) {
        if self.buffer.is_empty() {
            return;
        }
        let block = std::mem::take(&mut self.buffer);
        self.buffered_bytes = 0;
        self.store.apply_block(&self.table, &block);
    }
}

impl Drop for BatchWriter {
    fn drop(&mut self) {
        // An explicitly closed writer has an empty buffer; anything left is
        // from a writer dropped without close, which still must not lose
        // accepted puts.
        self.send_block();
    }
}
