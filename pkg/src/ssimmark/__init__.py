"""SSIM-gated adaptive LSB watermarking for 8-bit grayscale images."""
from .attacks import AttackSpec, crop, default_profile, gaussian_noise, jpeg_compress, low_pass, motion_blur, salt_pepper
from .embed import EmbedConfig, EmbedReport, WatermarkKey, embed, load_key, plan_block, save_key
from .errors import SsimmarkError
from .extract import (
    DetectorResponse,
    bit_error_rate,
    detector_response,
    extract_payload,
    random_candidates,
    reconstruct_watermark,
    true_payload,
)
from .image import BlockGrid, block_grid, get_bit, get_block, load_pgm, save_pgm, set_bit
from .lsb import lsb_embed, lsb_extract
from .ssim import SsimParams, block_stats, local_ssim, mean_ssim

__version__ = "0.1.0"
