# Realism metrics and the Hardy two-interferometer model.
