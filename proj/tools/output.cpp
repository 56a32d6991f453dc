#include "output.hpp"

#include "relaxrd/error.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>
#include <unistd.h>

namespace relaxrd::cli {

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << contents;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error("cannot write '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move output into place at '" + path.string() + "'");
    }
}

std::string snapshot_csv(const Snapshot& snap, const Problem& problem, const Mesh& mesh)
{
    std::string out = "# t=" + format_number(snap.t) + "\n";
    out += mesh.dim == 2 ? "x,y" : "x";
    for (const auto& u : problem.unknowns) {
        out += "," + u.name;
    }
    out += "\n";
    for (int j = 1; j <= mesh.y.m; ++j) {
        for (int i = 1; i <= mesh.x.m; ++i) {
            const auto c = static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(mesh.x.m)
                         + static_cast<std::size_t>(i - 1);
            out += format_number(mesh.x.center(i));
            if (mesh.dim == 2) {
                out += "," + format_number(mesh.y.center(j));
            }
            for (const auto& field : snap.fields) {
                out += "," + format_number(field[c]);
            }
            out += "\n";
        }
    }
    return out;
}

std::string report_csv(const RunReport& report, bool with_wall_time)
{
    std::string out = "m,error_L1,error_L2,rate_L1,rate_L2,wall_time\n";
    for (const auto& r : report.rows) {
        out += std::to_string(r.m) + "," + format_number(r.error_l1) + "," + format_number(r.error_l2) + ","
             + (r.rate_l1 ? format_number(*r.rate_l1) : "") + "," + (r.rate_l2 ? format_number(*r.rate_l2) : "")
             + "," + (with_wall_time ? format_number(r.wall_time) : "") + "\n";
    }
    return out;
}

} // namespace relaxrd::cli
