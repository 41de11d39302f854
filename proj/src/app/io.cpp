#include "ricdyn/app/io.hpp"

#include <fstream>
#include <string>
#include <system_error>

#include <unistd.h>

#include "ricdyn/error.hpp"

namespace ricdyn::app {

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Validation, "cannot write " + path.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.close();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(ErrorKind::Validation, "failed writing " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::Validation, "cannot replace " + path.string());
    }
}

}  // namespace ricdyn::app
