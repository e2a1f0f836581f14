#include <fstream>
#include <iterator>
#include <sstream>

#include "viz/errors.hpp"
#include "viz/io.hpp"

namespace viz {

void writeFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void writeImagePpm(const Image& image, const std::filesystem::path& path) { writeFile(path, encodePpm(image)); }

void writeMeshOff(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ostringstream s;
  writeOff(s, mesh);
  writeFile(path, s.str());
}

}  // namespace viz
