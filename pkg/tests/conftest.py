import pytest
from hypothesis import settings

from toklang import toys

settings.register_profile("pkg", deadline=None)
settings.load_profile("pkg")


@pytest.fixture(scope="session")
def dyck():
    return toys.dyck_grammar()


@pytest.fixture(scope="session")
def aab():
    return toys.aab_tokenizer()


@pytest.fixture(scope="session")
def brackets():
    return toys.bracket_tokenizer()
