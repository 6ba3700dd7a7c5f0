//! Recurrence plot bitmaps and plain PBM (P1) export.

use std::io::{self, Write};

use crate::recurrence::RecurrencePairSet;

/// Symmetric N_e x N_e binary image of a recurrence plot. The main diagonal
/// is always set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    size: usize,
    bits: Vec<bool>,
}

impl Bitmap {
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.size + col]
    }

    fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.size + col] = true;
    }

    pub fn count_set(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Serialize as plain PBM (P1), row-major, origin top-left, `1` for a
    /// recurrent cell.
    pub fn write_pbm<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "P1")?;
        writeln!(w, "{} {}", self.size, self.size)?;
        for row in 0..self.size {
            let line: Vec<&str> = (0..self.size)
                .map(|col| if self.get(row, col) { "1" } else { "0" })
                .collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn to_pbm_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_pbm(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("PBM is ASCII")
    }
}

/// Render the pair set as a recurrence plot: (i,j) and (j,i) set for every
/// pair, plus the line of identity.
pub fn recurrence_plot_bitmap(pairs: &RecurrencePairSet) -> Bitmap {
    let n = pairs.effective_len();
    let mut bmp = Bitmap {
        size: n,
        bits: vec![false; n * n],
    };
    for i in 0..n {
        bmp.set(i, i);
    }
    for &(i, j) in pairs.pairs() {
        bmp.set(i as usize, j as usize);
        bmp.set(j as usize, i as usize);
    }
    bmp
}
