#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>

#include "edgefem/mesh.hpp"

namespace edgefem {

namespace {

constexpr int kGmshTet4 = 4;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& section, const std::string& what) {
  throw Error("gmsh: malformed section $" + section + ": " + what);
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) return true;
  }
  return false;
}

void expect_end(std::istream& in, const std::string& section) {
  std::string line;
  if (!next_line(in, line) || line != "$End" + section)
    fail(section, "missing $End" + section);
}

}  // namespace

TetMesh read_gmsh(std::istream& in) {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::unordered_map<long, int> node_index;
  bool have_format = false;
  bool have_nodes = false;

  std::string line;
  while (next_line(in, line)) {
    if (line.empty() || line[0] != '$') throw Error("gmsh: expected a section header, got '" + line + "'");
    const std::string section = line.substr(1);

    if (section == "MeshFormat") {
      if (!next_line(in, line)) fail(section, "missing version line");
      std::istringstream ss(line);
      std::string version;
      int file_type = -1;
      int data_size = 0;
      if (!(ss >> version >> file_type >> data_size)) fail(section, "bad version line '" + line + "'");
      if (version.rfind("2.", 0) != 0) fail(section, "unsupported version " + version);
      if (file_type != 0) fail(section, "only ASCII files are supported");
      expect_end(in, section);
      have_format = true;
    } else if (section == "Nodes") {
      if (!have_format) fail(section, "appears before $MeshFormat");
      long count = -1;
      if (!next_line(in, line) || !(std::istringstream(line) >> count) || count < 0)
        fail(section, "bad node count");
      vertices.reserve(count);
      for (long i = 0; i < count; ++i) {
        long id = 0;
        Vec3 x;
        if (!next_line(in, line)) fail(section, "truncated node list");
        std::istringstream ss(line);
        if (!(ss >> id >> x.x() >> x.y() >> x.z())) fail(section, "bad node line '" + line + "'");
        if (!node_index.emplace(id, static_cast<int>(vertices.size())).second)
          fail(section, "duplicate node id " + std::to_string(id));
        vertices.push_back(x);
      }
      expect_end(in, section);
      have_nodes = true;
    } else if (section == "Elements") {
      if (!have_nodes) fail(section, "appears before $Nodes");
      long count = -1;
      if (!next_line(in, line) || !(std::istringstream(line) >> count) || count < 0)
        fail(section, "bad element count");
      for (long i = 0; i < count; ++i) {
        if (!next_line(in, line)) fail(section, "truncated element list");
        std::istringstream ss(line);
        long id = 0;
        int type = 0;
        int ntags = 0;
        if (!(ss >> id >> type >> ntags) || ntags < 0) fail(section, "bad element line '" + line + "'");
        for (int t = 0; t < ntags; ++t) {
          long tag = 0;
          if (!(ss >> tag)) fail(section, "bad element tags '" + line + "'");
        }
        if (type != kGmshTet4) continue;
        std::array<int, 4> tet;
        for (auto& v : tet) {
          long node = 0;
          if (!(ss >> node)) fail(section, "bad tetrahedron node list '" + line + "'");
          const auto it = node_index.find(node);
          if (it == node_index.end()) fail(section, "unknown node id " + std::to_string(node));
          v = it->second;
        }
        tets.push_back(tet);
      }
      expect_end(in, section);
    } else {
      // Unused section ($PhysicalNames, $NodeData, ...): skip to its end.
      const std::string end = "$End" + section;
      bool closed = false;
      while (next_line(in, line))
        if (line == end) {
          closed = true;
          break;
        }
      if (!closed) fail(section, "missing " + end);
    }
  }
  if (!have_format) throw Error("gmsh: missing $MeshFormat section");
  if (tets.empty()) throw Error("gmsh: file contains no 4-node tetrahedra");
  return TetMesh(std::move(vertices), std::move(tets));
}

TetMesh read_gmsh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("gmsh: cannot open " + path.string());
  return read_gmsh(in);
}

void write_gmsh(std::ostream& out, const TetMesh& mesh) {
  const auto old_precision = out.precision(17);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << mesh.num_vertices() << '\n';
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const Vec3& x = mesh.vertices()[i];
    out << i + 1 << ' ' << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
  }
  out << "$EndNodes\n$Elements\n" << mesh.num_tets() << '\n';
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto& v = mesh.tets()[t];
    out << t + 1 << ' ' << kGmshTet4 << " 2 1 1 " << v[0] + 1 << ' ' << v[1] + 1 << ' '
        << v[2] + 1 << ' ' << v[3] + 1 << '\n';
  }
  out << "$EndElements\n";
  out.precision(old_precision);
}

}  // namespace edgefem
