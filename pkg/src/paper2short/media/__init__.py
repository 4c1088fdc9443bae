"""Media primitives: MP4 container, JPEG frames, fonts."""
