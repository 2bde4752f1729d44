#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include <jpeglib.h>
#include <jerror.h>
#include <png.h>

#include "meshsampler/errors.hpp"
#include "meshsampler/mesh_io.hpp"

namespace meshsampler {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

TextureImage decode_png(std::span<const std::uint8_t> bytes, const std::string& origin) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw TextureError(origin, std::string("PNG header: ") + image.message);
    }
    // Decode as RGBA so alpha can be dropped instead of composited.
    image.format = PNG_FORMAT_RGBA;
    std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw TextureError(origin, "PNG decode: " + msg);
    }
    TextureImage out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    const std::size_t n = static_cast<std::size_t>(out.width) * out.height;
    out.pixels.resize(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
        out.pixels[3 * i] = rgba[4 * i];
        out.pixels[3 * i + 1] = rgba[4 * i + 1];
        out.pixels[3 * i + 2] = rgba[4 * i + 2];
    }
    return out;
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

// Warnings are silent except premature end of data, which is fatal here.
void jpeg_emit(j_common_ptr cinfo, int level) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    if (level < 0 && err->base.msg_code == JWRN_JPEG_EOF) {
        (*cinfo->err->format_message)(cinfo, err->message);
        std::longjmp(err->jump, 1);
    }
}

// No objects with non-trivial destructors may be constructed between setjmp
// and the last libjpeg call.
bool decode_jpeg_into(std::span<const std::uint8_t> bytes, TextureImage& out, std::vector<std::uint8_t>& row,
                      JpegErrorManager& err) {
    jpeg_decompress_struct cinfo;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    err.base.emit_message = jpeg_emit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        return false;
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    out.width = static_cast<int>(cinfo.output_width);
    out.height = static_cast<int>(cinfo.output_height);
    out.pixels.resize(static_cast<std::size_t>(out.width) * out.height * 3);
    row.resize(static_cast<std::size_t>(cinfo.output_width) * cinfo.output_components);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW rows[1] = {row.data()};
        const auto y = cinfo.output_scanline;
        jpeg_read_scanlines(&cinfo, rows, 1);
        std::memcpy(out.pixels.data() + static_cast<std::size_t>(y) * out.width * 3, row.data(),
                    static_cast<std::size_t>(out.width) * 3);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return true;
}

TextureImage decode_jpeg(std::span<const std::uint8_t> bytes, const std::string& origin) {
    TextureImage out;
    std::vector<std::uint8_t> row;
    JpegErrorManager err{};
    if (!decode_jpeg_into(bytes, out, row, err)) {
        throw TextureError(origin, std::string("JPEG decode: ") + err.message);
    }
    return out;
}

}  // namespace

TextureImage decode_texture(std::span<const std::uint8_t> bytes, const std::string& origin) {
    TextureImage image;
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0) {
        image = decode_png(bytes, origin);
    } else if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
        image = decode_jpeg(bytes, origin);
    } else {
        throw TextureError(origin, "unsupported image format");
    }
    if (image.width < 1 || image.height < 1) throw TextureError(origin, "empty image");
    return image;
}

TextureImage load_texture(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TextureError(path.string(), "file not found");
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return decode_texture(bytes, path.string());
}

void write_png(const TextureImage& image, const std::filesystem::path& path) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width);
    png.height = static_cast<png_uint_32>(image.height);
    png.format = PNG_FORMAT_RGB;
    const std::string file = path.string();
    if (!png_image_write_to_file(&png, file.c_str(), 0, image.pixels.data(), 0, nullptr)) {
        throw std::runtime_error("cannot write " + file + ": " + png.message);
    }
}

}  // namespace meshsampler
