import os

from app.utils import dump_json, slugify


class DataWriter:
    """
    Writes the JSON artifacts of fuscoh (build caches, reports) under one
    base directory. Output is canonical, so writing the same data twice
    produces byte-identical files.
    """

    def __init__(self, base_dir):
        self.base_dir = base_dir

    def write_json(self, data, filename, file_path=""):
        output_file = self.construct_file_path(file_path, filename)
        with open(output_file, 'w', encoding='utf-8') as json_file:
            json_file.write(dump_json(data))
            json_file.write("\n")
        return output_file

    def construct_file_path(self, file_path, filename):
        """
        Full path of a JSON file, creating the directories on the way
        """
        target_file_path = os.path.join(self.base_dir, file_path)
        os.makedirs(target_file_path, exist_ok=True)
        return os.path.join(target_file_path, f"{slugify(filename)}.json")
