# cython: language_level=3
"""Thin libjpeg wrapper used as an independent validation oracle.

Exposes the system libjpeg's coefficient access (the entropy-decoded,
still-quantized DCT blocks) and its pixel decode path.  Nothing here shares
code with this package's own codec, which is the point.
"""

import numpy as np

cdef extern from *:
    """
    #include <stdio.h>
    #include <string.h>
    #include <setjmp.h>
    #include "jpeglib.h"

    typedef struct {
        struct jpeg_error_mgr pub;
        jmp_buf jb;
        char msg[JMSG_LENGTH_MAX];
    } _refjpeg_err;

    static void _refjpeg_error_exit(j_common_ptr cinfo) {
        _refjpeg_err *e = (_refjpeg_err *) cinfo->err;
        (*cinfo->err->format_message)(cinfo, e->msg);
        longjmp(e->jb, 1);
    }

    /* Read per-component geometry, quantization steps, image dimensions,
       and (when out != NULL) the quantized coefficient blocks, natural
       order, row-major per component. */
    static int _refjpeg_coef(const char *path, int *ncomp, int dims[2],
                             int info[4][5], unsigned short qtab[4][64],
                             short *out, long cap, char *errmsg) {
        struct jpeg_decompress_struct c;
        _refjpeg_err e;
        jvirt_barray_ptr *arrays;
        FILE *f;
        long off = 0;
        int ci;
        JDIMENSION row, col;

        errmsg[0] = 0;
        f = fopen(path, "rb");
        if (!f) { snprintf(errmsg, 255, "cannot open %s", path); return 1; }
        c.err = jpeg_std_error(&e.pub);
        e.pub.error_exit = _refjpeg_error_exit;
        if (setjmp(e.jb)) {
            snprintf(errmsg, 255, "%s", e.msg);
            jpeg_destroy_decompress(&c);
            fclose(f);
            return 1;
        }
        jpeg_create_decompress(&c);
        jpeg_stdio_src(&c, f);
        jpeg_read_header(&c, TRUE);
        arrays = jpeg_read_coefficients(&c);
        if (arrays == NULL || c.num_components > 4) {
            snprintf(errmsg, 255, "unsupported component layout");
            jpeg_destroy_decompress(&c);
            fclose(f);
            return 1;
        }
        *ncomp = c.num_components;
        dims[0] = (int) c.image_width;
        dims[1] = (int) c.image_height;
        for (ci = 0; ci < c.num_components; ci++) {
            jpeg_component_info *comp = &c.comp_info[ci];
            JQUANT_TBL *qt = comp->quant_table;
            if (qt == NULL)
                qt = c.quant_tbl_ptrs[comp->quant_tbl_no];
            info[ci][0] = comp->component_id;
            info[ci][1] = comp->h_samp_factor;
            info[ci][2] = comp->v_samp_factor;
            info[ci][3] = (int) comp->width_in_blocks;
            info[ci][4] = (int) comp->height_in_blocks;
            if (qt == NULL) {
                snprintf(errmsg, 255, "missing quantization table");
                jpeg_destroy_decompress(&c);
                fclose(f);
                return 1;
            }
            memcpy(qtab[ci], qt->quantval, 64 * sizeof(unsigned short));
            if (out) {
                for (row = 0; row < comp->height_in_blocks; row++) {
                    JBLOCKARRAY buf = (*c.mem->access_virt_barray)
                        ((j_common_ptr) &c, arrays[ci], row, 1, FALSE);
                    for (col = 0; col < comp->width_in_blocks; col++) {
                        if (off + 64 > cap) {
                            snprintf(errmsg, 255, "coefficient buffer too small");
                            jpeg_destroy_decompress(&c);
                            fclose(f);
                            return 1;
                        }
                        memcpy(out + off, buf[0][col], 64 * sizeof(short));
                        off += 64;
                    }
                }
            }
        }
        jpeg_finish_decompress(&c);
        jpeg_destroy_decompress(&c);
        fclose(f);
        return 0;
    }

    /* Decode pixels; probe-only when out == NULL (fills w/h/nc). */
    static int _refjpeg_pixels(const char *path, int dct_float, int fancy,
                               int force_ycbcr, unsigned char *out, long cap,
                               int *w, int *h, int *nc, char *errmsg) {
        struct jpeg_decompress_struct c;
        _refjpeg_err e;
        FILE *f;
        long stride;

        errmsg[0] = 0;
        f = fopen(path, "rb");
        if (!f) { snprintf(errmsg, 255, "cannot open %s", path); return 1; }
        c.err = jpeg_std_error(&e.pub);
        e.pub.error_exit = _refjpeg_error_exit;
        if (setjmp(e.jb)) {
            snprintf(errmsg, 255, "%s", e.msg);
            jpeg_destroy_decompress(&c);
            fclose(f);
            return 1;
        }
        jpeg_create_decompress(&c);
        jpeg_stdio_src(&c, f);
        jpeg_read_header(&c, TRUE);
        c.dct_method = dct_float ? JDCT_FLOAT : JDCT_ISLOW;
        c.do_fancy_upsampling = fancy ? TRUE : FALSE;
        if (force_ycbcr && c.num_components == 3)
            c.out_color_space = JCS_YCbCr;
        jpeg_calc_output_dimensions(&c);
        *w = (int) c.output_width;
        *h = (int) c.output_height;
        *nc = (int) c.output_components;
        if (out == NULL) {
            jpeg_destroy_decompress(&c);
            fclose(f);
            return 0;
        }
        stride = (long) c.output_width * c.output_components;
        if (stride * (long) c.output_height > cap) {
            snprintf(errmsg, 255, "pixel buffer too small");
            jpeg_destroy_decompress(&c);
            fclose(f);
            return 1;
        }
        jpeg_start_decompress(&c);
        while (c.output_scanline < c.output_height) {
            unsigned char *rowp = out + (long) c.output_scanline * stride;
            jpeg_read_scanlines(&c, &rowp, 1);
        }
        jpeg_finish_decompress(&c);
        jpeg_destroy_decompress(&c);
        fclose(f);
        return 0;
    }
    """
    int _refjpeg_coef(const char *path, int *ncomp, int dims[2],
                      int info[4][5], unsigned short qtab[4][64],
                      short *out, long cap, char *errmsg)
    int _refjpeg_pixels(const char *path, int dct_float, int fancy,
                        int force_ycbcr, unsigned char *out, long cap,
                        int *w, int *h, int *nc, char *errmsg)


def read_coefficients(path):
    """Quantized coefficient dump per component, via libjpeg.

    Returns (width, height, components); each component is a dict with
    geometry, its quantization steps (natural order), and an int32 block
    array of shape (height_in_blocks, width_in_blocks, 8, 8), natural order.
    """
    cdef int ncomp = 0
    cdef int dims[2]
    cdef int info[4][5]
    cdef unsigned short qtab[4][64]
    cdef char errmsg[256]
    cdef short[::1] view
    path_b = str(path).encode()
    if _refjpeg_coef(path_b, &ncomp, dims, info, qtab,
                     NULL, 0, errmsg) != 0:
        raise RuntimeError(errmsg.decode("utf-8", "replace"))
    total = 0
    for i in range(ncomp):
        total += info[i][3] * info[i][4] * 64
    out = np.zeros(total, dtype=np.int16)
    view = out
    if _refjpeg_coef(path_b, &ncomp, dims, info, qtab,
                     &view[0], total, errmsg) != 0:
        raise RuntimeError(errmsg.decode("utf-8", "replace"))
    comps = []
    off = 0
    for i in range(ncomp):
        wb, hb = info[i][3], info[i][4]
        n = wb * hb * 64
        comps.append({
            "component_id": info[i][0],
            "h": info[i][1],
            "v": info[i][2],
            "width_in_blocks": wb,
            "height_in_blocks": hb,
            "quant_steps": np.array(
                [qtab[i][j] for j in range(64)], dtype=np.int32
            ),
            "blocks": out[off:off + n]
            .reshape(hb, wb, 8, 8)
            .astype(np.int32),
        })
        off += n
    return int(dims[0]), int(dims[1]), comps


def decode_pixels(path, dct_method="float", fancy_upsampling=False,
                  color_space="rgb"):
    """Pixel decode via libjpeg; returns (H, W, C) uint8 (C dropped if 1)."""
    cdef int w = 0, h = 0, nc = 0
    cdef char errmsg[256]
    cdef unsigned char[::1] view
    cdef int dct_float = 1 if dct_method == "float" else 0
    cdef int fancy = 1 if fancy_upsampling else 0
    cdef int force_ycbcr = 1 if color_space == "ycbcr" else 0
    path_b = str(path).encode()
    if _refjpeg_pixels(path_b, dct_float, fancy, force_ycbcr,
                       NULL, 0, &w, &h, &nc, errmsg) != 0:
        raise RuntimeError(errmsg.decode("utf-8", "replace"))
    out = np.zeros(h * w * nc, dtype=np.uint8)
    view = out
    if _refjpeg_pixels(path_b, dct_float, fancy, force_ycbcr,
                       &view[0], out.size, &w, &h, &nc, errmsg) != 0:
        raise RuntimeError(errmsg.decode("utf-8", "replace"))
    arr = out.reshape(h, w, nc)
    if nc == 1:
        return arr[:, :, 0]
    return arr
