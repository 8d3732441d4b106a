"""capalign: caption-reward alignment fine-tuning for a toy text-to-image
diffusion model on a synthetic colored-shapes world."""

__version__ = "0.1.0"
