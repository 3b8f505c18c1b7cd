# Generated by Django 6.0 on 2026-10-18 10:12

from django.db import migrations, models
import uuid


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='BenchmarkRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
                ('instance_hash', models.CharField(db_index=True, help_text='sha256 of the canonical instance document.', max_length=64)),
                ('algorithm', models.CharField(choices=[('onmfl', 'Randomized rounding (non-metric)'), ('ommfl', 'OFL wrapper (metric)'), ('ofl', 'Bare OFL plug-in')], max_length=10)),
                ('ofl', models.CharField(blank=True, max_length=32, verbose_name='OFL plug-in')),
                ('k_max', models.PositiveIntegerField()),
                ('n', models.PositiveIntegerField()),
                ('m', models.PositiveIntegerField()),
                ('seed_count', models.PositiveIntegerField()),
                ('order_count', models.PositiveIntegerField(default=1)),
                ('mean_ratio', models.FloatField(blank=True, help_text='Empty when the instance is beyond the exact oracle.', null=True)),
                ('max_ratio', models.FloatField(blank=True, null=True)),
                ('envelope', models.FloatField()),
                ('output_dir', models.CharField(blank=True, max_length=1024)),
            ],
            options={
                'verbose_name': 'Benchmark run',
                'verbose_name_plural': 'Benchmark runs',
                'ordering': ['-created_at'],
            },
        ),
    ]
