/** Tiny complex arithmetic and polynomial roots (Durand-Kerner). */

export interface Cx {
  re: number;
  im: number;
}

export const cx = (re: number, im = 0): Cx => ({ re, im });
export const cadd = (a: Cx, b: Cx): Cx => cx(a.re + b.re, a.im + b.im);
export const csub = (a: Cx, b: Cx): Cx => cx(a.re - b.re, a.im - b.im);
export const cmul = (a: Cx, b: Cx): Cx =>
  cx(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
export const cabs = (a: Cx): number => Math.hypot(a.re, a.im);

export function cdiv(a: Cx, b: Cx): Cx {
  const d = b.re * b.re + b.im * b.im;
  return cx((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
}

export function polyEval(coeffs: Cx[], z: Cx): Cx {
  let acc = cx(0);
  for (let i = coeffs.length - 1; i >= 0; i--) {
    acc = cadd(cmul(acc, z), coeffs[i]);
  }
  return acc;
}

/** Ascending coefficients; trailing near-zero leading terms are trimmed. */
export function polyRoots(coeffs: Cx[], tol = 1e-12): Cx[] {
  const scale = Math.max(...coeffs.map(cabs), 1e-300);
  let deg = coeffs.length - 1;
  while (deg > 0 && cabs(coeffs[deg]) < tol * scale) deg--;
  if (deg < 1) return [];
  const c = coeffs.slice(0, deg + 1);
  const lead = c[deg];
  const monic = c.map((a) => cdiv(a, lead));
  // Durand-Kerner from perturbed roots of unity
  let roots: Cx[] = [];
  const radius = 1 + Math.max(...monic.slice(0, deg).map(cabs));
  for (let i = 0; i < deg; i++) {
    const th = (2 * Math.PI * i) / deg + 0.4;
    roots.push(cx(radius * Math.cos(th) * 0.7, radius * Math.sin(th) * 0.7));
  }
  for (let iter = 0; iter < 200; iter++) {
    let moved = 0;
    const next: Cx[] = [];
    for (let i = 0; i < deg; i++) {
      let denom = cx(1);
      for (let j = 0; j < deg; j++) {
        if (j !== i) denom = cmul(denom, csub(roots[i], roots[j]));
      }
      const step = cdiv(polyEval(monic, roots[i]), denom);
      next.push(csub(roots[i], step));
      moved = Math.max(moved, cabs(step));
    }
    roots = next;
    if (moved < 1e-14 * radius) break;
  }
  return roots;
}
