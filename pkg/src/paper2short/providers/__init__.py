"""Text, speech and video providers plus the policy gateway."""
