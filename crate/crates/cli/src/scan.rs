use sperner_core::bounds::{scan_exact, scan_table2, table1_csv, table2_csv};

use crate::failure::Failure;
use crate::output::write_or_print;
use crate::ScanArgs;

pub fn run(a: &ScanArgs) -> Result<(), Failure> {
    let text = match a.table {
        1 => {
            if a.c < 2 {
                return Err(Failure::Usage("--c must be at least 2".into()));
            }
            let c = a.c;
            table1_csv(&scan_exact(a.n_max, move |x| x == c))
        }
        _ => {
            if a.r_min > a.r_max {
                return Err(Failure::Usage(format!("empty range --r-min {} --r-max {}", a.r_min, a.r_max)));
            }
            let rows = (a.r_min..=a.r_max).map(scan_table2).collect::<Result<Vec<_>, _>>()?;
            table2_csv(&rows)
        }
    };
    write_or_print(a.out.as_deref(), &text)
}
