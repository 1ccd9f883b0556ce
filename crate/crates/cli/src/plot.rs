//! gnuplot scripts for the CSV files written by each mode. Run them from the
//! output directory, e.g. `gnuplot trajectory.gp`.

pub fn trajectory() -> String {
    r#"set datafile separator ","
set terminal pngcairo size 900,600
set output "trajectory.png"
set key autotitle columnhead
set xlabel "k t"
set yrange [0:1.05]
plot "trajectory.csv" using 1:3 with lines title "p_S", \
     "" using 1:4 with lines title "C"
"#
    .to_string()
}

pub fn sweep() -> String {
    r#"set datafile separator ","
set terminal pngcairo size 900,600
set output "sweep.png"
set xlabel "phi (rad)"
set ylabel "Y_S"
plot "sweep.csv" using 1:2 with linespoints title "Y_S"
"#
    .to_string()
}

pub fn ensemble(k_d: &[f64]) -> String {
    let mut s = String::from(
        r#"set datafile separator ","
set terminal pngcairo size 900,600
set output "ensemble.png"
set xlabel "C_bar"
set ylabel "delta Y_S"
set logscale y
plot "#,
    );
    let parts: Vec<String> = k_d
        .iter()
        .map(|k| format!("\"ensemble.csv\" using ($2=={k} ? $9 : 1/0):8 with points pt 7 ps 0.4 title \"K_d = {k}\""))
        .collect();
    s.push_str(&parts.join(", \\\n     "));
    s.push('\n');
    s
}

pub fn analyze(k_d: &[f64]) -> String {
    let mut s = String::from(
        r#"set datafile separator ","
set terminal pngcairo size 900,600
set output "histograms.png"
set style data histeps
set xlabel "yield"
set ylabel "count"
plot "#,
    );
    let parts: Vec<String> = k_d
        .iter()
        .enumerate()
        .map(|(i, k)| {
            format!(
                "\"histograms.csv\" using (($1+$2)/2):{} title \"Y_S, K_d = {k}\", \"\" using (($1+$2)/2):{} title \"Y_T, K_d = {k}\"",
                3 + 2 * i,
                4 + 2 * i
            )
        })
        .collect();
    s.push_str(&parts.join(", \\\n     "));
    s.push_str(
        r#"

set output "exchange.png"
unset logscale
set style data linespoints
set xlabel "J bin centre"
set ylabel "r(delta Y_S, C_bar)"
set y2label "<<delta Y_S>>"
set y2tics
plot "exchange.csv" using (($2+$3)/2):($1==1 ? $5 : 1/0) title "r (K_d = 1)", \
     "" using (($2+$3)/2):($1==1 ? $6 : 1/0) axes x1y2 title "<<delta Y_S>> (K_d = 1)"
"#,
    );
    s
}
