#!/usr/bin/env python3
"""Reference FSIM computation used to freeze expected values for the C++ tests.

Direct numpy port of the published FSIM algorithm (log-Gabor phase congruency
+ Scharr gradient similarity). Operates on grayscale images scaled to [0, 255].
"""
import numpy as np


def _freq_grid(rows, cols):
    def axis(n):
        denom = (n - 1) if (n % 2) else n
        half = (n - 1) // 2
        idx = np.arange(n)
        shifted = np.where(idx <= half, idx, idx - n)
        return shifted / denom

    fx = axis(cols)[np.newaxis, :]
    fy = axis(rows)[:, np.newaxis]
    radius = np.sqrt(fx ** 2 + fy ** 2)
    theta = np.arctan2(-np.broadcast_to(fy, (rows, cols)),
                       np.broadcast_to(fx, (rows, cols)))
    return radius, theta


def _lowpass(rows, cols, cutoff=0.45, order=15):
    radius, _ = _freq_grid(rows, cols)
    return 1.0 / (1.0 + (radius / cutoff) ** (2 * order))


def phase_congruency(im, nscale=4, norient=4, min_wavelength=6, mult=2,
                     sigma_onf=0.55, dtheta_on_sigma=1.2, k=2.0, epsilon=1e-4):
    rows, cols = im.shape
    imfft = np.fft.fft2(im)
    radius, theta = _freq_grid(rows, cols)
    radius = radius.copy()
    radius[0, 0] = 1.0
    sintheta, costheta = np.sin(theta), np.cos(theta)
    lp = _lowpass(rows, cols)

    log_gabor = []
    for s in range(nscale):
        fo = 1.0 / (min_wavelength * mult ** s)
        lg = np.exp(-(np.log(radius / fo)) ** 2 / (2 * np.log(sigma_onf) ** 2))
        lg *= lp
        lg[0, 0] = 0.0
        log_gabor.append(lg)

    theta_sigma = np.pi / norient / dtheta_on_sigma
    energy_all = np.zeros((rows, cols))
    an_all = np.zeros((rows, cols))

    for o in range(norient):
        angl = o * np.pi / norient
        ds = sintheta * np.cos(angl) - costheta * np.sin(angl)
        dc = costheta * np.cos(angl) + sintheta * np.sin(angl)
        dtheta = np.abs(np.arctan2(ds, dc))
        spread = np.exp(-dtheta ** 2 / (2 * theta_sigma ** 2))

        sum_e = np.zeros((rows, cols))
        sum_o = np.zeros((rows, cols))
        sum_an = np.zeros((rows, cols))
        eo_list = []
        ifft_filters = []
        em_n = 0.0
        for s in range(nscale):
            filt = log_gabor[s] * spread
            ifft_filt = np.real(np.fft.ifft2(filt)) * np.sqrt(rows * cols)
            ifft_filters.append(ifft_filt)
            eo = np.fft.ifft2(imfft * filt)
            eo_list.append(eo)
            an = np.abs(eo)
            sum_an += an
            sum_e += np.real(eo)
            sum_o += np.imag(eo)
            if s == 0:
                em_n = np.sum(filt ** 2)

        x_energy = np.sqrt(sum_e ** 2 + sum_o ** 2) + epsilon
        mean_e = sum_e / x_energy
        mean_o = sum_o / x_energy
        energy = np.zeros((rows, cols))
        for s in range(nscale):
            e, oo = np.real(eo_list[s]), np.imag(eo_list[s])
            energy += e * mean_e + oo * mean_o - np.abs(e * mean_o - oo * mean_e)

        median_e2n = np.median(np.abs(eo_list[0]) ** 2)
        mean_e2n = -median_e2n / np.log(0.5)
        noise_power = mean_e2n / em_n

        est_sum_an2 = np.zeros((rows, cols))
        for s in range(nscale):
            est_sum_an2 += ifft_filters[s] ** 2
        est_sum_ai_aj = np.zeros((rows, cols))
        for si in range(nscale - 1):
            for sj in range(si + 1, nscale):
                est_sum_ai_aj += ifft_filters[si] * ifft_filters[sj]
        est_noise_energy2 = (2 * noise_power * np.sum(est_sum_an2)
                             + 4 * noise_power * np.sum(est_sum_ai_aj))
        tau = np.sqrt(est_noise_energy2 / 2)
        est_noise_energy = tau * np.sqrt(np.pi / 2)
        est_noise_sigma = np.sqrt((2 - np.pi / 2) * tau ** 2)
        t = (est_noise_energy + k * est_noise_sigma) / 1.7
        energy = np.maximum(energy - t, 0.0)

        energy_all += energy
        an_all += sum_an

    return energy_all / (an_all + epsilon)


def _conv2_same(im, kernel):
    from scipy.signal import convolve2d
    return convolve2d(im, kernel, mode='same')


def fsim(im1, im2, t1=0.85, t2=160.0):
    """im1, im2: grayscale numpy arrays on the [0, 255] scale."""
    rows, cols = im1.shape
    f = max(1, round(min(rows, cols) / 256))
    if f > 1:
        kernel = np.ones((f, f)) / (f * f)
        im1 = _conv2_same(im1, kernel)[::f, ::f]
        im2 = _conv2_same(im2, kernel)[::f, ::f]

    pc1 = phase_congruency(im1)
    pc2 = phase_congruency(im2)

    dx = np.array([[3, 0, -3], [10, 0, -10], [3, 0, -3]]) / 16.0
    dy = dx.T
    g1 = np.sqrt(_conv2_same(im1, dx) ** 2 + _conv2_same(im1, dy) ** 2)
    g2 = np.sqrt(_conv2_same(im2, dx) ** 2 + _conv2_same(im2, dy) ** 2)

    pc_sim = (2 * pc1 * pc2 + t1) / (pc1 ** 2 + pc2 ** 2 + t1)
    g_sim = (2 * g1 * g2 + t2) / (g1 ** 2 + g2 ** 2 + t2)
    pcm = np.maximum(pc1, pc2)
    return np.sum(pc_sim * g_sim * pcm) / np.sum(pcm)


if __name__ == '__main__':
    import sys
    from PIL import Image
    a = np.asarray(Image.open(sys.argv[1]).convert('L'), dtype=np.float64)
    b = np.asarray(Image.open(sys.argv[2]).convert('L'), dtype=np.float64)
    print(f"{fsim(a, b):.6f}")
