from hypothesis import settings

settings.register_profile("crosslayer", deadline=None, max_examples=200,
                          derandomize=True)
settings.load_profile("crosslayer")
