#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <csetjmp>
#include <memory>

#include "wmark/image.hpp"
#include "wmark/image_codec.hpp"

namespace wmark {

namespace {

enum class Format { png, bmp, jpeg };

Format format_from_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos)
        throw ArgumentError("unsupported format: no extension in '" + path + "'");
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == "png") return Format::png;
    if (ext == "bmp") return Format::bmp;
    if (ext == "jpg" || ext == "jpeg") return Format::jpeg;
    throw ArgumentError("unsupported format: ." + ext);
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open '" + path + "'");
    return f;
}

// --- PNG -----------------------------------------------------------------

RasterImage load_png(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("decode failure: png reader init");
    }
    RasterImage img;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("decode failure: corrupt PNG '" + path + "'");
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (depth == 16) png_set_strip_16(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA ||
        png_get_valid(png, info, PNG_INFO_tRNS)) {
        std::fprintf(stderr, "warning: stripping alpha channel from '%s'\n",
                     path.c_str());
        png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);

    const int ch = png_get_channels(png, info);
    if (ch != 1 && ch != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("decode failure: unsupported PNG channel count");
    }
    img = RasterImage(png_get_image_width(png, info),
                      png_get_image_height(png, info), ch);
    std::vector<png_bytep> rows(img.height);
    for (std::size_t r = 0; r < img.height; ++r)
        rows[r] = img.data.data() + r * img.width * ch;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png(const RasterImage& img, const std::string& path) {
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png writer init");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("cannot write '" + path + "'");
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height);
    for (std::size_t r = 0; r < img.height; ++r)
        rows[r] = const_cast<png_bytep>(img.data.data() +
                                        r * img.width * img.channels);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// --- BMP (uncompressed 8bpp-palette / 24bpp / 32bpp) ----------------------

std::uint32_t rd_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (p[1] << 8) | (p[2] << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t rd_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
void wr_u32(std::uint8_t* p, std::uint32_t v) {
    p[0] = v & 0xff;
    p[1] = (v >> 8) & 0xff;
    p[2] = (v >> 16) & 0xff;
    p[3] = (v >> 24) & 0xff;
}
void wr_u16(std::uint8_t* p, std::uint16_t v) {
    p[0] = v & 0xff;
    p[1] = (v >> 8) & 0xff;
}

RasterImage load_bmp(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    std::uint8_t hdr[54];
    if (std::fread(hdr, 1, 54, f.get()) != 54 || hdr[0] != 'B' || hdr[1] != 'M')
        throw IoError("decode failure: not a BMP '" + path + "'");
    const std::uint32_t data_off = rd_u32(hdr + 10);
    const std::uint32_t info_size = rd_u32(hdr + 14);
    if (info_size < 40) throw IoError("decode failure: unsupported BMP header");
    const std::int32_t w = static_cast<std::int32_t>(rd_u32(hdr + 18));
    const std::int32_t h_raw = static_cast<std::int32_t>(rd_u32(hdr + 22));
    const std::uint16_t bpp = rd_u16(hdr + 28);
    const std::uint32_t compression = rd_u32(hdr + 30);
    if (compression != 0)
        throw IoError("decode failure: compressed BMP not supported");
    if (w <= 0 || h_raw == 0)
        throw IoError("decode failure: bad BMP dimensions");
    const bool top_down = h_raw < 0;
    const std::size_t h = static_cast<std::size_t>(top_down ? -h_raw : h_raw);
    const std::size_t width = static_cast<std::size_t>(w);

    std::vector<std::uint8_t> palette;
    if (bpp == 8) {
        std::uint32_t ncolors = rd_u32(hdr + 46);
        if (ncolors == 0) ncolors = 256;
        if (std::fseek(f.get(), 14 + static_cast<long>(info_size), SEEK_SET))
            throw IoError("decode failure: truncated BMP");
        palette.resize(ncolors * 4);
        if (std::fread(palette.data(), 1, palette.size(), f.get()) !=
            palette.size())
            throw IoError("decode failure: truncated BMP palette");
    } else if (bpp != 24 && bpp != 32) {
        throw IoError("decode failure: unsupported BMP bit depth");
    }

    if (std::fseek(f.get(), static_cast<long>(data_off), SEEK_SET))
        throw IoError("decode failure: truncated BMP");

    const std::size_t src_bytes = (bpp / 8) * width;
    const std::size_t row_bytes = (src_bytes + 3) & ~std::size_t{3};
    std::vector<std::uint8_t> row(row_bytes);

    // an 8bpp gray-ramp palette decodes to a single-channel image
    bool gray_palette = bpp == 8;
    if (gray_palette) {
        for (std::size_t i = 0; i * 4 + 2 < palette.size(); ++i)
            if (palette[4 * i] != i || palette[4 * i + 1] != i ||
                palette[4 * i + 2] != i) {
                gray_palette = false;
                break;
            }
    }
    const int channels = (bpp == 8 && gray_palette) ? 1 : 3;
    if (bpp == 32)
        std::fprintf(stderr, "warning: stripping alpha channel from '%s'\n",
                     path.c_str());

    RasterImage img(width, h, channels);
    for (std::size_t rr = 0; rr < h; ++rr) {
        if (std::fread(row.data(), 1, row_bytes, f.get()) != row_bytes)
            throw IoError("decode failure: truncated BMP data");
        const std::size_t dst_r = top_down ? rr : h - 1 - rr;
        std::uint8_t* dst = img.data.data() + dst_r * width * channels;
        if (bpp == 8) {
            for (std::size_t c = 0; c < width; ++c) {
                const std::uint8_t idx = row[c];
                if (channels == 1) {
                    dst[c] = idx;
                } else {
                    dst[3 * c + 0] = palette[4 * idx + 2];
                    dst[3 * c + 1] = palette[4 * idx + 1];
                    dst[3 * c + 2] = palette[4 * idx + 0];
                }
            }
        } else {
            const std::size_t step = bpp / 8;
            for (std::size_t c = 0; c < width; ++c) {
                dst[3 * c + 0] = row[step * c + 2];
                dst[3 * c + 1] = row[step * c + 1];
                dst[3 * c + 2] = row[step * c + 0];
            }
        }
    }
    return img;
}

void save_bmp(const RasterImage& img, const std::string& path) {
    FilePtr f = open_file(path, "wb");
    const bool gray = img.channels == 1;
    const std::size_t src_bytes = gray ? img.width : img.width * 3;
    const std::size_t row_bytes = (src_bytes + 3) & ~std::size_t{3};
    const std::size_t palette_bytes = gray ? 256 * 4 : 0;
    const std::size_t data_off = 54 + palette_bytes;
    const std::size_t file_size = data_off + row_bytes * img.height;

    std::uint8_t hdr[54] = {};
    hdr[0] = 'B';
    hdr[1] = 'M';
    wr_u32(hdr + 2, static_cast<std::uint32_t>(file_size));
    wr_u32(hdr + 10, static_cast<std::uint32_t>(data_off));
    wr_u32(hdr + 14, 40);
    wr_u32(hdr + 18, static_cast<std::uint32_t>(img.width));
    wr_u32(hdr + 22, static_cast<std::uint32_t>(img.height));
    wr_u16(hdr + 26, 1);
    wr_u16(hdr + 28, gray ? 8 : 24);
    wr_u32(hdr + 34, static_cast<std::uint32_t>(row_bytes * img.height));
    wr_u32(hdr + 46, gray ? 256 : 0);
    if (std::fwrite(hdr, 1, 54, f.get()) != 54)
        throw IoError("cannot write '" + path + "'");
    if (gray) {
        std::uint8_t pal[256 * 4];
        for (int i = 0; i < 256; ++i) {
            pal[4 * i + 0] = pal[4 * i + 1] = pal[4 * i + 2] =
                static_cast<std::uint8_t>(i);
            pal[4 * i + 3] = 0;
        }
        if (std::fwrite(pal, 1, sizeof pal, f.get()) != sizeof pal)
            throw IoError("cannot write '" + path + "'");
    }
    std::vector<std::uint8_t> row(row_bytes, 0);
    for (std::size_t rr = 0; rr < img.height; ++rr) {
        const std::size_t src_r = img.height - 1 - rr; // bottom-up
        const std::uint8_t* src =
            img.data.data() + src_r * img.width * img.channels;
        if (gray) {
            std::memcpy(row.data(), src, img.width);
        } else {
            for (std::size_t c = 0; c < img.width; ++c) {
                row[3 * c + 0] = src[3 * c + 2];
                row[3 * c + 1] = src[3 * c + 1];
                row[3 * c + 2] = src[3 * c + 0];
            }
        }
        if (std::fwrite(row.data(), 1, row_bytes, f.get()) != row_bytes)
            throw IoError("cannot write '" + path + "'");
    }
}

// --- JPEG ------------------------------------------------------------------

struct JpegErr {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    JpegErr* err = reinterpret_cast<JpegErr*>(cinfo->err);
    longjmp(err->jump, 1);
}

} // namespace

std::vector<std::uint8_t> jpeg_encode(const RasterImage& img, int quality) {
    if (quality < 1 || quality > 100)
        throw ArgumentError("bad attack parameter: JPEG quality out of [1,100]");
    jpeg_compress_struct cinfo;
    JpegErr err;
    cinfo.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpeg_error_exit;

    unsigned char* buf = nullptr;
    unsigned long buf_size = 0;
    if (setjmp(err.jump)) {
        jpeg_destroy_compress(&cinfo);
        free(buf);
        throw IoError("decode failure: JPEG encode");
    }
    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, &buf, &buf_size);
    cinfo.image_width = static_cast<JDIMENSION>(img.width);
    cinfo.image_height = static_cast<JDIMENSION>(img.height);
    cinfo.input_components = img.channels;
    cinfo.in_color_space = img.channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE); // baseline
    if (img.channels == 3) {
        // 4:2:0 chroma subsampling
        cinfo.comp_info[0].h_samp_factor = 2;
        cinfo.comp_info[0].v_samp_factor = 2;
        cinfo.comp_info[1].h_samp_factor = 1;
        cinfo.comp_info[1].v_samp_factor = 1;
        cinfo.comp_info[2].h_samp_factor = 1;
        cinfo.comp_info[2].v_samp_factor = 1;
    }
    jpeg_start_compress(&cinfo, TRUE);
    const std::size_t stride = img.width * img.channels;
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(
            img.data.data() + cinfo.next_scanline * stride);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    std::vector<std::uint8_t> out(buf, buf + buf_size);
    free(buf);
    return out;
}

RasterImage jpeg_decode(const std::vector<std::uint8_t>& bytes) {
    jpeg_decompress_struct cinfo;
    JpegErr err;
    cinfo.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError("decode failure: corrupt JPEG");
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space =
        cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);
    RasterImage img(cinfo.output_width, cinfo.output_height,
                    cinfo.output_components);
    const std::size_t stride = img.width * img.channels;
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = img.data.data() + cinfo.output_scanline * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

RasterImage load_image(const std::string& path) {
    switch (format_from_path(path)) {
        case Format::png:
            return load_png(path);
        case Format::bmp:
            return load_bmp(path);
        case Format::jpeg: {
            FilePtr f = open_file(path, "rb");
            std::fseek(f.get(), 0, SEEK_END);
            const long sz = std::ftell(f.get());
            std::fseek(f.get(), 0, SEEK_SET);
            std::vector<std::uint8_t> bytes(static_cast<std::size_t>(sz));
            if (sz > 0 &&
                std::fread(bytes.data(), 1, bytes.size(), f.get()) !=
                    bytes.size())
                throw IoError("cannot read '" + path + "'");
            return jpeg_decode(bytes);
        }
    }
    throw IoError("unreachable");
}

void save_image(const RasterImage& img, const std::string& path,
                int jpeg_quality) {
    if (img.width == 0 || img.height == 0 ||
        (img.channels != 1 && img.channels != 3))
        throw ConstraintError("shape mismatch: empty or non-gray/RGB image");
    switch (format_from_path(path)) {
        case Format::png:
            save_png(img, path);
            return;
        case Format::bmp:
            save_bmp(img, path);
            return;
        case Format::jpeg: {
            const auto bytes = jpeg_encode(img, jpeg_quality);
            FilePtr f = open_file(path, "wb");
            if (std::fwrite(bytes.data(), 1, bytes.size(), f.get()) !=
                bytes.size())
                throw IoError("cannot write '" + path + "'");
            return;
        }
    }
}

} // namespace wmark
