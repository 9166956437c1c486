#pragma once

#include <filesystem>
#include <string>

#include "voxtopo/volume.hpp"

namespace voxtopo {

enum class VolumeFormat { automatic, nifti1, npy, raw };

VolumeFormat parse_volume_format(const std::string& name);

/// Loads a 2D or 3D volume. 2D arrays come back with nz = 1.
///
/// Axis mapping: NIfTI dim[1..3] -> (nx, ny, nz). A C-order NPY of shape
/// (d0, d1, d2) maps to (nx, ny, nz) = (d2, d1, d0) so z is the slowest-varying
/// axis as stored; Fortran order maps (d0, d1, d2) -> (nx, ny, nz) directly.
/// Raw volumes take dims [x, y, z] from a JSON sidecar (x fastest).
///
/// Automatic detection goes by extension (.nii, .nii.gz, .npy); anything else is
/// treated as raw and needs a sidecar at "<path>.json" or "<stem>.json".
GrayVolume load_volume(const std::filesystem::path& path, VolumeFormat format = VolumeFormat::automatic);

GrayVolume load_nifti(const std::filesystem::path& path);
GrayVolume load_npy(const std::filesystem::path& path);
GrayVolume load_raw(const std::filesystem::path& path, const std::filesystem::path& sidecar);

enum class NpyDtype { uint8, uint16, float64 };

/// Writes a C-order NPY v1.0 array of shape (nz, ny, nx). Integer dtypes
/// require every voxel to be an in-range integer.
void write_npy(const GrayVolume& vol, const std::filesystem::path& path, NpyDtype dtype = NpyDtype::float64);

/// Same as write_npy for a quantized volume (bins stored as integers).
void write_npy(const QuantizedVolume& vol, const std::filesystem::path& path);

}  // namespace voxtopo
