//! Layer kinds and their forward/backward kernels.
//!
//! Kernels operate on whole batches laid out `[n, c, h, w]` (or `[n, f]`)
//! and parallelize over samples. Per-sample outputs occupy disjoint slices
//! and cross-sample reductions (weight gradients) are summed in fixed
//! chunk order, so results are bit-identical for any worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Samples per gradient-accumulation chunk. Fixed (not worker-dependent)
/// so that summation order never changes.
const GRAD_CHUNK: usize = 8;

#[derive(Debug, Clone)]
pub struct Conv2d {
    /// `[out_c, in_c, k, k]`
    pub weight: Tensor,
    /// `[out_c]`
    pub bias: Tensor,
    pub stride: usize,
    pub pad: usize,
}

#[derive(Debug, Clone)]
pub struct FullyConnected {
    /// `[out_f, in_f]`
    pub weight: Tensor,
    /// `[out_f]`
    pub bias: Tensor,
}

#[derive(Debug, Clone)]
pub enum Layer {
    Conv2d(Conv2d),
    MaxPool2x2,
    AvgPool { k: usize, stride: usize },
    Relu,
    Flatten,
    FullyConnected(FullyConnected),
}

impl Layer {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Layer::Conv2d(_) => "conv2d",
            Layer::MaxPool2x2 => "maxpool2x2",
            Layer::AvgPool { .. } => "avgpool",
            Layer::Relu => "relu",
            Layer::Flatten => "flatten",
            Layer::FullyConnected(_) => "fc",
        }
    }

    /// Weight/bias pair for parameterized layers.
    pub fn params(&self) -> Option<(&Tensor, &Tensor)> {
        match self {
            Layer::Conv2d(c) => Some((&c.weight, &c.bias)),
            Layer::FullyConnected(f) => Some((&f.weight, &f.bias)),
            _ => None,
        }
    }

    pub fn params_mut(&mut self) -> Option<(&mut Tensor, &mut Tensor)> {
        match self {
            Layer::Conv2d(c) => Some((&mut c.weight, &mut c.bias)),
            Layer::FullyConnected(f) => Some((&mut f.weight, &mut f.bias)),
            _ => None,
        }
    }

    /// Output shape for a conforming input shape (without the batch axis).
    pub fn out_shape(&self, input: &[usize]) -> Result<Vec<usize>> {
        let err = |msg: String| Err(Error::ShapeMismatch(msg));
        match self {
            Layer::Conv2d(c) => {
                let (oc, ic, k, _) = conv_dims(&c.weight)?;
                match input {
                    &[c_in, h, w] => {
                        if c_in != ic {
                            return err(format!("conv2d expects {ic} channels, got {c_in}"));
                        }
                        let oh = conv_extent(h, k, c.stride, c.pad)?;
                        let ow = conv_extent(w, k, c.stride, c.pad)?;
                        Ok(vec![oc, oh, ow])
                    }
                    other => err(format!("conv2d expects (c,h,w) input, got {other:?}")),
                }
            }
            Layer::MaxPool2x2 => match input {
                &[c, h, w] => {
                    if h < 2 || w < 2 {
                        return err(format!("maxpool2x2 input too small: {h}x{w}"));
                    }
                    Ok(vec![c, h / 2, w / 2])
                }
                other => err(format!("maxpool2x2 expects (c,h,w) input, got {other:?}")),
            },
            Layer::AvgPool { k, stride } => match input {
                &[c, h, w] => {
                    if *k == 0 || *stride == 0 || h < *k || w < *k {
                        return err(format!("avgpool {k}x{k}/{stride} cannot pool {h}x{w}"));
                    }
                    Ok(vec![c, (h - k) / stride + 1, (w - k) / stride + 1])
                }
                other => err(format!("avgpool expects (c,h,w) input, got {other:?}")),
            },
            Layer::Relu => Ok(input.to_vec()),
            Layer::Flatten => Ok(vec![input.iter().product()]),
            Layer::FullyConnected(f) => {
                let (of, inf) = fc_dims(&f.weight)?;
                match input {
                    &[n] if n == inf => Ok(vec![of]),
                    other => err(format!("fc expects {inf} inputs, got {other:?}")),
                }
            }
        }
    }
}

pub(crate) fn conv_dims(w: &Tensor) -> Result<(usize, usize, usize, usize)> {
    match w.shape() {
        &[oc, ic, kh, kw] if kh == kw => Ok((oc, ic, kh, kw)),
        other => Err(Error::ShapeMismatch(format!(
            "conv weight must be [oc, ic, k, k], got {other:?}"
        ))),
    }
}

pub(crate) fn fc_dims(w: &Tensor) -> Result<(usize, usize)> {
    match w.shape() {
        &[of, inf] => Ok((of, inf)),
        other => Err(Error::ShapeMismatch(format!(
            "fc weight must be [out, in], got {other:?}"
        ))),
    }
}

fn conv_extent(input: usize, k: usize, stride: usize, pad: usize) -> Result<usize> {
    let padded = input + 2 * pad;
    if padded < k || stride == 0 {
        return Err(Error::ShapeMismatch(format!(
            "conv kernel {k} (stride {stride}, pad {pad}) exceeds input extent {input}"
        )));
    }
    Ok((padded - k) / stride + 1)
}

// ---------------------------------------------------------------------------
// conv2d
// ---------------------------------------------------------------------------

pub fn conv2d_forward(x: &Tensor, w: &Tensor, b: &Tensor, stride: usize, pad: usize) -> Result<Tensor> {
    let (n, c, h, wd) = x.dims4()?;
    let (oc, ic, k, _) = conv_dims(w)?;
    if c != ic {
        return Err(Error::ShapeMismatch(format!(
            "conv input has {c} channels, weight expects {ic}"
        )));
    }
    let oh = conv_extent(h, k, stride, pad)?;
    let ow = conv_extent(wd, k, stride, pad)?;

    let in_sz = c * h * wd;
    let out_sz = oc * oh * ow;
    let mut out = Tensor::zeros(&[n, oc, oh, ow]);
    let wdat = w.data();
    let bdat = b.data();
    let xdat = x.data();

    out.data_mut()
        .par_chunks_mut(out_sz)
        .enumerate()
        .for_each(|(i, y)| {
            conv2d_forward_sample(
                &xdat[i * in_sz..(i + 1) * in_sz],
                wdat,
                bdat,
                y,
                (c, h, wd),
                (oc, k, oh, ow),
                stride,
                pad,
            );
        });
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn conv2d_forward_sample(
    x: &[f32],
    w: &[f32],
    b: &[f32],
    y: &mut [f32],
    (c, h, wd): (usize, usize, usize),
    (oc, k, oh, ow): (usize, usize, usize, usize),
    stride: usize,
    pad: usize,
) {
    for o in 0..oc {
        let plane = &mut y[o * oh * ow..(o + 1) * oh * ow];
        plane.fill(b[o]);
        for i in 0..c {
            let xin = &x[i * h * wd..(i + 1) * h * wd];
            let wbase = (o * c + i) * k * k;
            for kh in 0..k {
                for kw in 0..k {
                    let wv = w[wbase + kh * k + kw];
                    if wv == 0.0 {
                        continue;
                    }
                    for or in 0..oh {
                        let ir = or * stride + kh;
                        if ir < pad || ir - pad >= h {
                            continue;
                        }
                        let ir = ir - pad;
                        let orow = &mut plane[or * ow..(or + 1) * ow];
                        let xrow = &xin[ir * wd..(ir + 1) * wd];
                        // iw = ocol*stride + kw - pad must fall in [0, wd)
                        for (ocol, dst) in orow.iter_mut().enumerate() {
                            let iw = ocol * stride + kw;
                            if iw < pad || iw - pad >= wd {
                                continue;
                            }
                            *dst += wv * xrow[iw - pad];
                        }
                    }
                }
            }
        }
    }
}

/// Gradients of a conv layer: returns (dx, dw, db).
pub fn conv2d_backward(
    x: &Tensor,
    w: &Tensor,
    stride: usize,
    pad: usize,
    dy: &Tensor,
) -> Result<(Tensor, Tensor, Tensor)> {
    let (n, c, h, wd) = x.dims4()?;
    let (oc, _, k, _) = conv_dims(w)?;
    let (dn, doc, oh, ow) = dy.dims4()?;
    if dn != n || doc != oc {
        return Err(Error::ShapeMismatch("conv backward batch/channel".into()));
    }

    let in_sz = c * h * wd;
    let out_sz = oc * oh * ow;
    let mut dx = Tensor::zeros(x.shape());
    let xdat = x.data();
    let wdat = w.data();
    let dydat = dy.data();

    // dx: disjoint per sample.
    dx.data_mut()
        .par_chunks_mut(in_sz)
        .enumerate()
        .for_each(|(i, dxs)| {
            let dys = &dydat[i * out_sz..(i + 1) * out_sz];
            for o in 0..oc {
                let dplane = &dys[o * oh * ow..(o + 1) * oh * ow];
                for ci in 0..c {
                    let dxin = &mut dxs[ci * h * wd..(ci + 1) * h * wd];
                    let wbase = (o * c + ci) * k * k;
                    for kh in 0..k {
                        for kw in 0..k {
                            let wv = wdat[wbase + kh * k + kw];
                            if wv == 0.0 {
                                continue;
                            }
                            for or in 0..oh {
                                let ir = or * stride + kh;
                                if ir < pad || ir - pad >= h {
                                    continue;
                                }
                                let ir = ir - pad;
                                let drow = &dplane[or * ow..(or + 1) * ow];
                                let xrow = &mut dxin[ir * wd..(ir + 1) * wd];
                                for (ocol, &g) in drow.iter().enumerate() {
                                    let iw = ocol * stride + kw;
                                    if iw < pad || iw - pad >= wd {
                                        continue;
                                    }
                                    xrow[iw - pad] += wv * g;
                                }
                            }
                        }
                    }
                }
            }
        });

    // dw/db: per fixed-size chunk, then ordered reduction.
    let chunk_grads: Vec<(Vec<f32>, Vec<f32>)> = (0..n)
        .collect::<Vec<_>>()
        .par_chunks(GRAD_CHUNK)
        .map(|samples| {
            let mut dw = vec![0.0f32; w.len()];
            let mut db = vec![0.0f32; oc];
            for &i in samples {
                let xs = &xdat[i * in_sz..(i + 1) * in_sz];
                let dys = &dydat[i * out_sz..(i + 1) * out_sz];
                for o in 0..oc {
                    let dplane = &dys[o * oh * ow..(o + 1) * oh * ow];
                    db[o] += dplane.iter().sum::<f32>();
                    for ci in 0..c {
                        let xin = &xs[ci * h * wd..(ci + 1) * h * wd];
                        let wbase = (o * c + ci) * k * k;
                        for kh in 0..k {
                            for kw in 0..k {
                                let mut acc = 0.0f32;
                                for or in 0..oh {
                                    let ir = or * stride + kh;
                                    if ir < pad || ir - pad >= h {
                                        continue;
                                    }
                                    let ir = ir - pad;
                                    let drow = &dplane[or * ow..(or + 1) * ow];
                                    let xrow = &xin[ir * wd..(ir + 1) * wd];
                                    for (ocol, &g) in drow.iter().enumerate() {
                                        let iw = ocol * stride + kw;
                                        if iw < pad || iw - pad >= wd {
                                            continue;
                                        }
                                        acc += xrow[iw - pad] * g;
                                    }
                                }
                                dw[wbase + kh * k + kw] += acc;
                            }
                        }
                    }
                }
            }
            (dw, db)
        })
        .collect();

    let mut dw = Tensor::zeros(w.shape());
    let mut db = Tensor::zeros(&[oc]);
    for (cw, cb) in chunk_grads {
        for (a, b) in dw.data_mut().iter_mut().zip(&cw) {
            *a += b;
        }
        for (a, b) in db.data_mut().iter_mut().zip(&cb) {
            *a += b;
        }
    }
    Ok((dx, dw, db))
}

// ---------------------------------------------------------------------------
// fully connected
// ---------------------------------------------------------------------------

pub fn fc_forward(x: &Tensor, w: &Tensor, b: &Tensor) -> Result<Tensor> {
    let (n, inf) = x.dims2()?;
    let (of, winf) = fc_dims(w)?;
    if inf != winf {
        return Err(Error::ShapeMismatch(format!(
            "fc input has {inf} features, weight expects {winf}"
        )));
    }
    let mut out = Tensor::zeros(&[n, of]);
    let xdat = x.data();
    let wdat = w.data();
    let bdat = b.data();
    out.data_mut()
        .par_chunks_mut(of)
        .enumerate()
        .for_each(|(i, y)| {
            let xs = &xdat[i * inf..(i + 1) * inf];
            for (o, dst) in y.iter_mut().enumerate() {
                let row = &wdat[o * inf..(o + 1) * inf];
                let mut acc = bdat[o];
                for (wv, xv) in row.iter().zip(xs) {
                    acc += wv * xv;
                }
                *dst = acc;
            }
        });
    Ok(out)
}

pub fn fc_backward(x: &Tensor, w: &Tensor, dy: &Tensor) -> Result<(Tensor, Tensor, Tensor)> {
    let (n, inf) = x.dims2()?;
    let (of, _) = fc_dims(w)?;
    let (dn, dof) = dy.dims2()?;
    if dn != n || dof != of {
        return Err(Error::ShapeMismatch("fc backward".into()));
    }
    let xdat = x.data();
    let wdat = w.data();
    let dydat = dy.data();

    let mut dx = Tensor::zeros(x.shape());
    dx.data_mut()
        .par_chunks_mut(inf)
        .enumerate()
        .for_each(|(i, dxs)| {
            let dys = &dydat[i * of..(i + 1) * of];
            for (o, &g) in dys.iter().enumerate() {
                if g == 0.0 {
                    continue;
                }
                let row = &wdat[o * inf..(o + 1) * inf];
                for (d, wv) in dxs.iter_mut().zip(row) {
                    *d += g * wv;
                }
            }
        });

    let chunk_grads: Vec<(Vec<f32>, Vec<f32>)> = (0..n)
        .collect::<Vec<_>>()
        .par_chunks(GRAD_CHUNK)
        .map(|samples| {
            let mut dw = vec![0.0f32; w.len()];
            let mut db = vec![0.0f32; of];
            for &i in samples {
                let xs = &xdat[i * inf..(i + 1) * inf];
                let dys = &dydat[i * of..(i + 1) * of];
                for (o, &g) in dys.iter().enumerate() {
                    db[o] += g;
                    if g == 0.0 {
                        continue;
                    }
                    let row = &mut dw[o * inf..(o + 1) * inf];
                    for (d, xv) in row.iter_mut().zip(xs) {
                        *d += g * xv;
                    }
                }
            }
            (dw, db)
        })
        .collect();

    let mut dw = Tensor::zeros(w.shape());
    let mut db = Tensor::zeros(&[of]);
    for (cw, cb) in chunk_grads {
        for (a, b) in dw.data_mut().iter_mut().zip(&cw) {
            *a += b;
        }
        for (a, b) in db.data_mut().iter_mut().zip(&cb) {
            *a += b;
        }
    }
    Ok((dx, dw, db))
}

// ---------------------------------------------------------------------------
// pooling / relu
// ---------------------------------------------------------------------------

pub fn maxpool2x2_forward(x: &Tensor) -> Result<Tensor> {
    let (n, c, h, w) = x.dims4()?;
    let (oh, ow) = (h / 2, w / 2);
    let mut out = Tensor::zeros(&[n, c, oh, ow]);
    let xdat = x.data();
    let in_sz = c * h * w;
    let out_sz = c * oh * ow;
    out.data_mut()
        .par_chunks_mut(out_sz)
        .enumerate()
        .for_each(|(i, y)| {
            let xs = &xdat[i * in_sz..(i + 1) * in_sz];
            for ci in 0..c {
                for or in 0..oh {
                    for oc in 0..ow {
                        let base = ci * h * w + (or * 2) * w + oc * 2;
                        let m = xs[base]
                            .max(xs[base + 1])
                            .max(xs[base + w])
                            .max(xs[base + w + 1]);
                        y[ci * oh * ow + or * ow + oc] = m;
                    }
                }
            }
        });
    Ok(out)
}

/// Routes gradients to the argmax of each window (first occurrence wins).
pub fn maxpool2x2_backward(x: &Tensor, dy: &Tensor) -> Result<Tensor> {
    let (n, c, h, w) = x.dims4()?;
    let (_, _, oh, ow) = dy.dims4()?;
    let mut dx = Tensor::zeros(x.shape());
    let xdat = x.data();
    let dydat = dy.data();
    let in_sz = c * h * w;
    let out_sz = c * oh * ow;
    dx.data_mut()
        .par_chunks_mut(in_sz)
        .enumerate()
        .for_each(|(i, dxs)| {
            let xs = &xdat[i * in_sz..(i + 1) * in_sz];
            let dys = &dydat[i * out_sz..(i + 1) * out_sz];
            for ci in 0..c {
                for or in 0..oh {
                    for oc in 0..ow {
                        let base = ci * h * w + (or * 2) * w + oc * 2;
                        let idx = [base, base + 1, base + w, base + w + 1];
                        let mut best = idx[0];
                        for &j in &idx[1..] {
                            if xs[j] > xs[best] {
                                best = j;
                            }
                        }
                        dxs[best] += dys[ci * oh * ow + or * ow + oc];
                    }
                }
            }
        });
    Ok(dx)
}

pub fn avgpool_forward(x: &Tensor, k: usize, stride: usize) -> Result<Tensor> {
    let (n, c, h, w) = x.dims4()?;
    let oh = (h - k) / stride + 1;
    let ow = (w - k) / stride + 1;
    let inv = 1.0 / (k * k) as f32;
    let mut out = Tensor::zeros(&[n, c, oh, ow]);
    let xdat = x.data();
    let in_sz = c * h * w;
    let out_sz = c * oh * ow;
    out.data_mut()
        .par_chunks_mut(out_sz)
        .enumerate()
        .for_each(|(i, y)| {
            let xs = &xdat[i * in_sz..(i + 1) * in_sz];
            for ci in 0..c {
                for or in 0..oh {
                    for ocol in 0..ow {
                        let mut acc = 0.0f32;
                        for kh in 0..k {
                            let row = ci * h * w + (or * stride + kh) * w + ocol * stride;
                            acc += xs[row..row + k].iter().sum::<f32>();
                        }
                        y[ci * oh * ow + or * ow + ocol] = acc * inv;
                    }
                }
            }
        });
    Ok(out)
}

pub fn avgpool_backward(x: &Tensor, k: usize, stride: usize, dy: &Tensor) -> Result<Tensor> {
    let (n, c, h, w) = x.dims4()?;
    let (_, _, oh, ow) = dy.dims4()?;
    let inv = 1.0 / (k * k) as f32;
    let mut dx = Tensor::zeros(x.shape());
    let dydat = dy.data();
    let in_sz = c * h * w;
    let out_sz = c * oh * ow;
    dx.data_mut()
        .par_chunks_mut(in_sz)
        .enumerate()
        .for_each(|(i, dxs)| {
            let dys = &dydat[i * out_sz..(i + 1) * out_sz];
            for ci in 0..c {
                for or in 0..oh {
                    for ocol in 0..ow {
                        let g = dys[ci * oh * ow + or * ow + ocol] * inv;
                        for kh in 0..k {
                            let row = ci * h * w + (or * stride + kh) * w + ocol * stride;
                            for d in &mut dxs[row..row + k] {
                                *d += g;
                            }
                        }
                    }
                }
            }
        });
    let _ = n;
    Ok(dx)
}

pub fn relu_forward(x: &Tensor) -> Tensor {
    let mut out = x.clone();
    for v in out.data_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    out
}

pub fn relu_backward(x: &Tensor, dy: &Tensor) -> Tensor {
    let mut dx = dy.clone();
    for (d, &xv) in dx.data_mut().iter_mut().zip(x.data()) {
        if xv <= 0.0 {
            *d = 0.0;
        }
    }
    dx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(shape: &[usize], data: &[f32]) -> Tensor {
        Tensor::from_vec(shape, data.to_vec()).unwrap()
    }

    /// Brute-force convolution by nested loops, f64 accumulation.
    fn conv_oracle(
        x: &Tensor,
        w: &Tensor,
        b: &Tensor,
        stride: usize,
        pad: usize,
    ) -> Tensor {
        let (n, c, h, wd) = x.dims4().unwrap();
        let (oc, _, k, _) = conv_dims(w).unwrap();
        let oh = (h + 2 * pad - k) / stride + 1;
        let ow = (wd + 2 * pad - k) / stride + 1;
        let mut out = Tensor::zeros(&[n, oc, oh, ow]);
        for i in 0..n {
            for o in 0..oc {
                for orow in 0..oh {
                    for ocol in 0..ow {
                        let mut acc = b.data()[o] as f64;
                        for ci in 0..c {
                            for kh in 0..k {
                                for kw in 0..k {
                                    let ir = orow * stride + kh;
                                    let icol = ocol * stride + kw;
                                    if ir < pad || icol < pad {
                                        continue;
                                    }
                                    let (ir, icol) = (ir - pad, icol - pad);
                                    if ir >= h || icol >= wd {
                                        continue;
                                    }
                                    let xv = x.data()[((i * c + ci) * h + ir) * wd + icol];
                                    let wv = w.data()[((o * c + ci) * k + kh) * k + kw];
                                    acc += xv as f64 * wv as f64;
                                }
                            }
                        }
                        out.data_mut()[((i * oc + o) * oh + orow) * ow + ocol] = acc as f32;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn conv_matches_nested_loop_oracle_on_fixed_input() {
        // 3x3 kernel over a 5x5 input, compared against hand nested loops.
        let x = t(
            &[1, 1, 5, 5],
            &[
                1., 2., 3., 4., 5., //
                0., 1., 0., 1., 0., //
                -1., -2., -3., -4., -5., //
                2., 2., 2., 2., 2., //
                1., 0., 1., 0., 1.,
            ],
        );
        let w = t(&[1, 1, 3, 3], &[1., 0., -1., 2., 1., 0., 0., -2., 1.]);
        let b = t(&[1], &[0.5]);
        let got = conv2d_forward(&x, &w, &b, 1, 0).unwrap();
        let want = conv_oracle(&x, &w, &b, 1, 0);
        assert_eq!(got.shape(), &[1, 1, 3, 3]);
        for (g, e) in got.data().iter().zip(want.data()) {
            assert!((g - e).abs() < 1e-5, "{g} vs {e}");
        }
    }

    #[test]
    fn conv_with_padding_matches_oracle() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = Tensor::from_vec(
            &[2, 3, 7, 7],
            (0..2 * 3 * 7 * 7).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        )
        .unwrap();
        let w = Tensor::from_vec(
            &[4, 3, 5, 5],
            (0..4 * 3 * 25).map(|_| rng.gen_range(-0.5..0.5)).collect(),
        )
        .unwrap();
        let b = Tensor::from_vec(&[4], vec![0.1, -0.2, 0.3, 0.0]).unwrap();
        let got = conv2d_forward(&x, &w, &b, 1, 2).unwrap();
        let want = conv_oracle(&x, &w, &b, 1, 2);
        assert_eq!(got.shape(), want.shape());
        for (g, e) in got.data().iter().zip(want.data()) {
            assert!((g - e).abs() < 1e-4);
        }
    }

    #[test]
    fn maxpool_forward_and_backward_route() {
        let x = t(&[1, 1, 4, 4], &[
            1., 5., 2., 0., //
            3., 4., 1., 1., //
            0., 0., 9., 8., //
            0., 0., 7., 6.,
        ]);
        let y = maxpool2x2_forward(&x).unwrap();
        assert_eq!(y.data(), &[5., 2., 0., 9.]);
        // maxpool picks first occurrence on ties (x[0,0..2,2..4] has max 2 at (0,2)).
        let dy = t(&[1, 1, 2, 2], &[1., 1., 1., 1.]);
        let dx = maxpool2x2_backward(&x, &dy).unwrap();
        let mut want = vec![0.0f32; 16];
        want[1] = 1.0; // 5
        want[2] = 1.0; // 2
        want[8] = 1.0; // first 0 in bottom-left window
        want[10] = 1.0; // 9
        assert_eq!(dx.data(), &want[..]);
    }

    #[test]
    fn avgpool_is_window_mean() {
        let x = t(&[1, 1, 4, 4], &[
            1., 1., 2., 2., //
            1., 1., 2., 2., //
            3., 3., 4., 4., //
            3., 3., 4., 4.,
        ]);
        let y = avgpool_forward(&x, 2, 2).unwrap();
        assert_eq!(y.data(), &[1., 2., 3., 4.]);
    }

    #[test]
    fn fc_forward_identity_weights_pass_input_through() {
        let x = t(&[2, 3], &[1., 2., 3., 4., 5., 6.]);
        let mut w = Tensor::zeros(&[3, 3]);
        for i in 0..3 {
            w.data_mut()[i * 3 + i] = 1.0;
        }
        let b = Tensor::zeros(&[3]);
        let y = fc_forward(&x, &w, &b).unwrap();
        assert_eq!(y.data(), x.data());
    }

    #[test]
    fn relu_clamps_negatives_and_masks_gradient() {
        let x = t(&[1, 4], &[-1., 0., 2., -3.]);
        let y = relu_forward(&x);
        assert_eq!(y.data(), &[0., 0., 2., 0.]);
        let dy = t(&[1, 4], &[1., 1., 1., 1.]);
        let dx = relu_backward(&x, &dy);
        assert_eq!(dx.data(), &[0., 0., 1., 0.]);
    }
}
