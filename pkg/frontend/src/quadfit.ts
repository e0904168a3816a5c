/** Least-squares quadratic fit, used to overlay the fitted curve on the
 * offset-sweep points (the coefficients are re-derived from the CSV data
 * rather than trusted from elsewhere). */

export interface QuadFit {
  a2: number;
  a1: number;
  a0: number;
}

export function quadFit(xs: number[], ys: number[]): QuadFit {
  if (xs.length !== ys.length || xs.length < 3) {
    throw new Error(`quadratic fit needs >= 3 points, got ${xs.length}`);
  }
  // normal equations for [x^2, x, 1]
  let s4 = 0,
    s3 = 0,
    s2 = 0,
    s1 = 0,
    s0 = 0,
    t2 = 0,
    t1 = 0,
    t0 = 0;
  for (let i = 0; i < xs.length; i++) {
    const x = xs[i];
    const y = ys[i];
    const xx = x * x;
    s4 += xx * xx;
    s3 += xx * x;
    s2 += xx;
    s1 += x;
    s0 += 1;
    t2 += xx * y;
    t1 += x * y;
    t0 += y;
  }
  const m = [
    [s4, s3, s2],
    [s3, s2, s1],
    [s2, s1, s0],
  ];
  const rhs = [t2, t1, t0];
  // Gaussian elimination with partial pivoting on the 3x3 system
  for (let col = 0; col < 3; col++) {
    let pivot = col;
    for (let row = col + 1; row < 3; row++) {
      if (Math.abs(m[row][col]) > Math.abs(m[pivot][col])) pivot = row;
    }
    if (Math.abs(m[pivot][col]) < 1e-14) {
      throw new Error("degenerate quadratic fit (collinear x values)");
    }
    [m[col], m[pivot]] = [m[pivot], m[col]];
    [rhs[col], rhs[pivot]] = [rhs[pivot], rhs[col]];
    for (let row = col + 1; row < 3; row++) {
      const f = m[row][col] / m[col][col];
      for (let k = col; k < 3; k++) m[row][k] -= f * m[col][k];
      rhs[row] -= f * rhs[col];
    }
  }
  const sol = [0, 0, 0];
  for (let row = 2; row >= 0; row--) {
    let acc = rhs[row];
    for (let k = row + 1; k < 3; k++) acc -= m[row][k] * sol[k];
    sol[row] = acc / m[row][row];
  }
  return { a2: sol[0], a1: sol[1], a0: sol[2] };
}
